#ifndef FINMET_SVG_HPP
#define FINMET_SVG_HPP

#include <string>
#include <vector>

namespace finmet::svg {

// Minimal self-contained line/scatter plot writer.
class Plot {
  public:
    Plot(std::string title, std::string xlabel, std::string ylabel);

    void add_line(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& label = "");
    void add_scatter(const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& label = "");

    void write(const std::string& path) const;

  private:
    struct Series {
        std::vector<double> x, y;
        std::string label;
        bool scatter = false;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

}  // namespace finmet::svg

#endif
