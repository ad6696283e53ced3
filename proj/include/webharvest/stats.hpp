#pragma once

#include <string>
#include <vector>

#include "webharvest/types.hpp"

namespace webharvest {

// Per-coordinate arithmetic mean. Throws PreconditionError on empty input or
// mixed dims.
std::vector<double> centroid(const std::vector<FeatureVector>& vectors);

// Scalar radial spread: root-mean-square Euclidean distance of the vectors
// from their centroid.
double dispersion(const std::vector<FeatureVector>& vectors);

// Euclidean distance between the two sets' centroids.
double distance_to_class(const std::vector<FeatureVector>& class_vectors,
                         const std::vector<FeatureVector>& expansion_vectors);

// Geometry of one expansion relative to its class, the inputs of the
// expansion score.
struct ExpansionStats {
    std::string class_id;
    std::string keyword;
    double d = 0.0; // centroid distance to the class
    double s = 0.0; // dispersion of the expansion's images
    int dup = 0;    // images shared with the base class
    int n_images = 0;

    bool operator==(const ExpansionStats&) const = default;
};

ExpansionStats compute_expansion_stats(const std::string& class_id, const std::string& keyword,
                                       const std::vector<FeatureVector>& class_vectors,
                                       const std::vector<FeatureVector>& expansion_vectors,
                                       int dup_count);

} // namespace webharvest
