#pragma once

#include <string>
#include <vector>

namespace kpeaks::svg {

struct Marker {
    double x = 0;
    double y = 0;
    bool maximal = true;
};

// Static plot of a piecewise-linear trajectory with peak markers.
// Presentation only; no numeric result is derived from the file.
void write_trajectory(const std::string& path, const std::string& title,
                      const std::vector<std::pair<double, double>>& polyline,
                      const std::vector<Marker>& markers);

}  // namespace kpeaks::svg
