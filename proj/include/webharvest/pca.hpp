#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "webharvest/types.hpp"

namespace webharvest {

struct PcaResult {
    // n x out_dim projections of the mean-centered inputs.
    std::vector<std::vector<double>> points;
    // out_dim x dim orthonormal components, variance-descending. Sign
    // convention: the largest-magnitude entry of each component is positive.
    std::vector<std::vector<double>> components;
    std::vector<double> explained_variance; // non-increasing
    bool degenerate = false; // all inputs identical: zero projection
};

// Mean-centered projection onto the top principal components, via
// eigendecomposition of the covariance matrix. Requires |vectors| > out_dim.
PcaResult pca_project(const std::vector<FeatureVector>& vectors, int out_dim = 2);

// CSV export of a 2-D projection: image_id,x,y,label — one dot per image for
// external plotting.
void write_pca_csv(const std::filesystem::path& destination, const PcaResult& pca,
                   const std::vector<std::string>& image_ids,
                   const std::vector<std::string>& labels,
                   const std::string& comment = "");

} // namespace webharvest
