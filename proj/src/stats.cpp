#include "webharvest/stats.hpp"

#include <cmath>

#include "webharvest/errors.hpp"

namespace webharvest {

namespace {

std::size_t common_dim(const std::vector<FeatureVector>& vectors, const char* what) {
    if (vectors.empty()) throw PreconditionError(std::string(what) + ": empty input");
    const std::size_t dim = vectors.front().dim();
    for (const auto& vec : vectors) {
        if (vec.dim() != dim) throw PreconditionError(std::string(what) + ": mixed dims");
    }
    return dim;
}

} // namespace

std::vector<double> centroid(const std::vector<FeatureVector>& vectors) {
    const std::size_t dim = common_dim(vectors, "centroid");
    std::vector<double> mean(dim, 0.0);
    for (const auto& vec : vectors) {
        for (std::size_t i = 0; i < dim; ++i) mean[i] += vec.values[i];
    }
    const double inv = 1.0 / static_cast<double>(vectors.size());
    for (double& v : mean) v *= inv;
    return mean;
}

double dispersion(const std::vector<FeatureVector>& vectors) {
    const std::size_t dim = common_dim(vectors, "dispersion");
    const std::vector<double> mean = centroid(vectors);
    double sum_sq = 0.0;
    for (const auto& vec : vectors) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double delta = vec.values[i] - mean[i];
            sum_sq += delta * delta;
        }
    }
    return std::sqrt(sum_sq / static_cast<double>(vectors.size()));
}

double distance_to_class(const std::vector<FeatureVector>& class_vectors,
                         const std::vector<FeatureVector>& expansion_vectors) {
    const std::vector<double> a = centroid(class_vectors);
    const std::vector<double> b = centroid(expansion_vectors);
    if (a.size() != b.size()) throw PreconditionError("distance_to_class: mixed dims");
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double delta = a[i] - b[i];
        sum_sq += delta * delta;
    }
    return std::sqrt(sum_sq);
}

ExpansionStats compute_expansion_stats(const std::string& class_id, const std::string& keyword,
                                       const std::vector<FeatureVector>& class_vectors,
                                       const std::vector<FeatureVector>& expansion_vectors,
                                       int dup_count) {
    ExpansionStats stats;
    stats.class_id = class_id;
    stats.keyword = keyword;
    stats.d = distance_to_class(class_vectors, expansion_vectors);
    stats.s = dispersion(expansion_vectors);
    stats.dup = dup_count;
    stats.n_images = static_cast<int>(expansion_vectors.size());
    return stats;
}

} // namespace webharvest
