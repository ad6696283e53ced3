#include "webharvest/pca.hpp"

#include <cmath>
#include <fstream>

#include <Eigen/Dense>

#include "webharvest/errors.hpp"

namespace webharvest {

PcaResult pca_project(const std::vector<FeatureVector>& vectors, int out_dim) {
    if (out_dim < 1) throw PreconditionError("pca_project: out_dim must be >= 1");
    const auto n = static_cast<Eigen::Index>(vectors.size());
    if (n <= out_dim) {
        throw PreconditionError("pca_project: need more vectors than output dimensions");
    }
    const auto dim = static_cast<Eigen::Index>(vectors.front().dim());
    if (out_dim > dim) throw PreconditionError("pca_project: out_dim exceeds input dim");

    Eigen::MatrixXd data(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(vectors[i].dim()) != dim) {
            throw PreconditionError("pca_project: mixed dims");
        }
        for (Eigen::Index j = 0; j < dim; ++j) data(i, j) = vectors[i].values[j];
    }

    const Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;

    const Eigen::MatrixXd covariance = data.transpose() * data / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
    if (solver.info() != Eigen::Success) throw Error("pca_project: eigendecomposition failed");

    PcaResult result;
    result.degenerate = solver.eigenvalues().maxCoeff() <= 0.0;

    // Eigen returns eigenvalues ascending; take the top out_dim, descending.
    result.components.resize(static_cast<std::size_t>(out_dim));
    result.explained_variance.resize(static_cast<std::size_t>(out_dim));
    Eigen::MatrixXd basis(dim, out_dim);
    for (int c = 0; c < out_dim; ++c) {
        const Eigen::Index src = dim - 1 - c;
        Eigen::VectorXd component = solver.eigenvectors().col(src);
        // Deterministic sign: make the largest-magnitude entry positive.
        Eigen::Index arg_max = 0;
        component.cwiseAbs().maxCoeff(&arg_max);
        if (component(arg_max) < 0.0) component = -component;
        basis.col(c) = component;
        result.explained_variance[static_cast<std::size_t>(c)] =
            std::max(0.0, solver.eigenvalues()(src));
        result.components[static_cast<std::size_t>(c)]
            .assign(component.data(), component.data() + dim);
    }

    Eigen::MatrixXd projected = data * basis;
    if (result.degenerate) projected.setZero();
    result.points.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& point = result.points[static_cast<std::size_t>(i)];
        point.resize(static_cast<std::size_t>(out_dim));
        for (int c = 0; c < out_dim; ++c) point[static_cast<std::size_t>(c)] = projected(i, c);
    }
    return result;
}

void write_pca_csv(const std::filesystem::path& destination, const PcaResult& pca,
                   const std::vector<std::string>& image_ids,
                   const std::vector<std::string>& labels, const std::string& comment) {
    if (image_ids.size() != pca.points.size() || labels.size() != pca.points.size()) {
        throw PreconditionError("write_pca_csv: ids/labels must match projection size");
    }
    std::ofstream out(destination);
    if (!out) throw Error("cannot open " + destination.string() + " for writing");
    if (!comment.empty()) out << "# " << comment << '\n';
    out << "image_id,x,y,label\n";
    out.precision(17);
    for (std::size_t i = 0; i < pca.points.size(); ++i) {
        const auto& p = pca.points[i];
        out << image_ids[i] << ',' << p[0] << ',' << (p.size() > 1 ? p[1] : 0.0) << ','
            << labels[i] << '\n';
    }
    if (!out) throw Error("write to " + destination.string() + " failed");
}

} // namespace webharvest
