#pragma once

#include <string>
#include <vector>

namespace lerw {

// Dependency-free line/scatter plots; convenience output, never load-bearing.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    void add_series(std::string label, std::vector<double> xs, std::vector<double> ys,
                    bool line = true);

    std::string render(int width = 640, int height = 440) const;
    void write(const std::string& path, int width = 640, int height = 440) const;

private:
    struct Series {
        std::string label;
        std::vector<double> xs, ys;
        bool line;
    };
    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
};

}  // namespace lerw
