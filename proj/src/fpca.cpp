#include "fpca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace tsc {

void jacobi_eigen(std::vector<double> a, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& v) {
    if (n < 1 || a.size() != size_t(n) * n) fail_invalid("jacobi input is not n*n");
    v.assign(size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[size_t(i) * n + i] = 1.0;

    double fro2 = 0.0;
    for (double x : a) fro2 += x * x;
    double stop = fro2 * 1e-28;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off2 += a[size_t(p) * n + q] * a[size_t(p) * n + q];
        if (off2 <= stop) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double apq = a[size_t(p) * n + q];
                if (apq == 0.0) continue;
                double theta = (a[size_t(q) * n + q] - a[size_t(p) * n + p]) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double aip = a[size_t(i) * n + p], aiq = a[size_t(i) * n + q];
                    a[size_t(i) * n + p] = c * aip - s * aiq;
                    a[size_t(i) * n + q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    double api = a[size_t(p) * n + i], aqi = a[size_t(q) * n + i];
                    a[size_t(p) * n + i] = c * api - s * aqi;
                    a[size_t(q) * n + i] = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    double vip = v[size_t(i) * n + p], viq = v[size_t(i) * n + q];
                    v[size_t(i) * n + p] = c * vip - s * viq;
                    v[size_t(i) * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) eigenvalues[i] = a[size_t(i) * n + i];
}

namespace {

void fix_sign(std::vector<double>& w) {
    double peak = 0.0;
    for (double x : w) peak = std::max(peak, std::abs(x));
    if (peak == 0.0) return;
    for (double x : w) {
        if (std::abs(x) > 1e-12 * peak) {
            if (x < 0.0)
                for (double& y : w) y = -y;
            return;
        }
    }
}

// Unit vector orthogonal to everything in `basis`, from the canonical vector
// with the largest residual (lowest index on ties).
std::vector<double> completion_vector(const std::vector<std::vector<double>>& basis, int dim) {
    int best = -1;
    double best_norm2 = -1.0;
    std::vector<double> r(dim), best_r;
    for (int j = 0; j < dim; ++j) {
        std::fill(r.begin(), r.end(), 0.0);
        r[j] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& w : basis) {
                double dot = 0.0;
                for (int i = 0; i < dim; ++i) dot += w[i] * r[i];
                for (int i = 0; i < dim; ++i) r[i] -= dot * w[i];
            }
        }
        double norm2 = 0.0;
        for (double x : r) norm2 += x * x;
        if (norm2 > best_norm2 + 1e-15) {
            best_norm2 = norm2;
            best = j;
            best_r = r;
        }
        if (norm2 > 0.9) break;  // good enough, keep it deterministic and cheap
    }
    if (best < 0 || best_norm2 <= 0.0) fail_numeric("cannot complete orthonormal basis");
    double inv = 1.0 / std::sqrt(best_norm2);
    for (double& x : best_r) x *= inv;
    return best_r;
}

std::vector<int> order_desc(const std::vector<double>& values) {
    std::vector<int> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return values[a] > values[b];
    });
    return order;
}

}  // namespace

FpcaBasis fpca_fit(const Dataset& dataset, int k) {
    dataset.validate();
    int count = dataset.count();
    int dim = dataset.channels() * dataset.length();
    if (k < 1 || k > std::min(count, dim))
        fail_invalid("component count must lie in [1, min(record count, grid size)]");

    FpcaBasis basis;
    basis.channels = dataset.channels();
    basis.length = dataset.length();
    basis.mean_curve.assign(dim, 0.0);
    for (const Record& rec : dataset.records)
        for (int d = 0; d < dim; ++d) basis.mean_curve[d] += rec.samples[d];
    for (double& m : basis.mean_curve) m /= count;

    std::vector<double> centered(size_t(count) * dim);
    for (int r = 0; r < count; ++r)
        for (int d = 0; d < dim; ++d)
            centered[size_t(r) * dim + d] = dataset.records[r].samples[d] - basis.mean_curve[d];

    std::vector<double> eigvals, eigvecs;
    bool gram = count < dim;
    int n = gram ? count : dim;
    {
        std::vector<double> mat(size_t(n) * n, 0.0);
        if (gram) {
            for (int i = 0; i < count; ++i) {
                for (int j = i; j < count; ++j) {
                    double dot = 0.0;
                    const double* xi = centered.data() + size_t(i) * dim;
                    const double* xj = centered.data() + size_t(j) * dim;
                    for (int d = 0; d < dim; ++d) dot += xi[d] * xj[d];
                    mat[size_t(i) * n + j] = mat[size_t(j) * n + i] = dot / count;
                }
            }
        } else {
            for (int a = 0; a < dim; ++a) {
                for (int b = a; b < dim; ++b) {
                    double dot = 0.0;
                    for (int r = 0; r < count; ++r)
                        dot += centered[size_t(r) * dim + a] * centered[size_t(r) * dim + b];
                    mat[size_t(a) * n + b] = mat[size_t(b) * n + a] = dot / count;
                }
            }
        }
        jacobi_eigen(std::move(mat), n, eigvals, eigvecs);
    }

    std::vector<int> order = order_desc(eigvals);
    double top = std::max(eigvals[order[0]], 0.0);
    basis.components.reserve(k);
    basis.eigenvalues.reserve(k);
    for (int rank = 0; rank < k; ++rank) {
        int col = order[rank];
        double lambda = std::max(eigvals[col], 0.0);
        std::vector<double> w(dim, 0.0);
        if (gram) {
            if (lambda > top * 1e-12 && lambda > 0.0) {
                for (int r = 0; r < count; ++r) {
                    double vc = eigvecs[size_t(r) * n + col];
                    const double* xr = centered.data() + size_t(r) * dim;
                    for (int d = 0; d < dim; ++d) w[d] += vc * xr[d];
                }
                double inv = 1.0 / std::sqrt(double(count) * lambda);
                for (double& x : w) x *= inv;
            } else {
                lambda = 0.0;
                w = completion_vector(basis.components, dim);
            }
        } else {
            for (int d = 0; d < dim; ++d) w[d] = eigvecs[size_t(d) * n + col];
        }
        fix_sign(w);
        basis.components.push_back(std::move(w));
        basis.eigenvalues.push_back(lambda);
    }
    return basis;
}

std::pair<std::vector<double>, Record> fpca_project_reconstruct(const FpcaBasis& basis,
                                                                const Record& record) {
    Record rec = fpca_reconstruct(basis, record, basis.k()).second;
    std::vector<double> scores(basis.k());
    for (int i = 0; i < basis.k(); ++i) {
        double dot = 0.0;
        for (int d = 0; d < basis.dim(); ++d)
            dot += basis.components[i][d] * (record.samples[d] - basis.mean_curve[d]);
        scores[i] = dot;
    }
    return {std::move(scores), std::move(rec)};
}

std::pair<double, Record> fpca_reconstruct(const FpcaBasis& basis, const Record& record, int k) {
    if (record.channels != basis.channels || record.length != basis.length)
        fail_invalid("record shape does not match basis");
    if (k < 0 || k > basis.k()) fail_invalid("component count out of range");
    Record out = record;
    std::copy(basis.mean_curve.begin(), basis.mean_curve.end(), out.samples.begin());
    for (int i = 0; i < k; ++i) {
        double dot = 0.0;
        const auto& w = basis.components[i];
        for (int d = 0; d < basis.dim(); ++d)
            dot += w[d] * (record.samples[d] - basis.mean_curve[d]);
        for (int d = 0; d < basis.dim(); ++d) out.samples[d] += dot * w[d];
    }
    double err = 0.0;
    for (int d = 0; d < basis.dim(); ++d) {
        double diff = record.samples[d] - out.samples[d];
        err += diff * diff;
    }
    return {err / basis.dim(), std::move(out)};
}

Dataset basis_as_dataset(const FpcaBasis& basis) {
    Dataset out;
    Record mean;
    mean.id = "mean";
    mean.channels = basis.channels;
    mean.length = basis.length;
    mean.sampling_rate = 1.0;
    mean.samples = basis.mean_curve;
    out.records.push_back(std::move(mean));
    for (int i = 0; i < basis.k(); ++i) {
        Record comp;
        comp.id = "component" + std::to_string(i);
        comp.channels = basis.channels;
        comp.length = basis.length;
        comp.sampling_rate = 1.0;
        comp.samples = basis.components[i];
        out.records.push_back(std::move(comp));
    }
    return out;
}

}  // namespace tsc
