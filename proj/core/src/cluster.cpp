#include "hypercluster/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "hypercluster/error.hpp"
#include "hypercluster/random.hpp"

namespace hypercluster {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix to_rows(const Tensor& x)
{
    Matrix rows(x.rows(), std::vector<double>(x.cols()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            rows[i][j] = x(i, j);
        }
    }
    return rows;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

void check_k(const Tensor& x, std::size_t k)
{
    if (x.rank() != 2) {
        throw DimensionError("clustering expects an [N x D] matrix");
    }
    if (k == 0) {
        throw ArgumentError("number of clusters must be positive");
    }
    if (k > x.rows()) {
        throw ArgumentError("cannot form " + std::to_string(k) + " clusters from " + std::to_string(x.rows()) +
                            " samples");
    }
}

Matrix plus_plus(const Matrix& pts, std::size_t k, Rng& rng)
{
    const std::size_t n = pts.size();
    Matrix centers;
    centers.push_back(pts[rng.index(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = sq_dist(pts[i], centers[0]);
    }
    while (centers.size() < k) {
        double total = 0.0;
        for (double v : d2) {
            total += v;
        }
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = rng.index(n);
        } else {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        centers.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(pts[i], centers.back()));
        }
    }
    return centers;
}

struct LloydRun {
    std::vector<int> labels;
    Matrix centers;
    double inertia = 0.0;
    std::vector<double> trace;
    std::size_t iterations = 0;
};

LloydRun lloyd(const Matrix& pts, Matrix centers, std::size_t max_iter)
{
    const std::size_t n = pts.size();
    const std::size_t k = centers.size();
    const std::size_t dim = pts.front().size();
    LloydRun run;
    run.labels.assign(n, -1);
    std::vector<double> dist(n);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(pts[i], centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = sq_dist(pts[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(c);
                }
            }
            if (run.labels[i] != best) {
                changed = true;
                run.labels[i] = best;
            }
            dist[i] = best_d;
            inertia += best_d;
        }

        // Re-seed empty clusters with the currently farthest points.
        std::vector<std::size_t> counts(k, 0);
        for (int l : run.labels) {
            counts[static_cast<std::size_t>(l)] += 1;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i) {
                if (dist[i] > dist[far] && counts[static_cast<std::size_t>(run.labels[i])] > 1) {
                    far = i;
                }
            }
            if (counts[static_cast<std::size_t>(run.labels[far])] <= 1) {
                continue;
            }
            counts[static_cast<std::size_t>(run.labels[far])] -= 1;
            counts[c] = 1;
            run.labels[far] = static_cast<int>(c);
            inertia -= dist[far];
            dist[far] = 0.0;
            centers[c] = pts[far];
            changed = true;
        }
        run.trace.push_back(inertia);
        run.inertia = inertia;
        run.iterations = iter + 1;
        if (!changed) {
            break;
        }

        Matrix sums(k, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[static_cast<std::size_t>(run.labels[i])];
            for (std::size_t j = 0; j < dim; ++j) {
                s[j] += pts[i][j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < dim; ++j) {
                centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
    }
    run.centers = std::move(centers);
    return run;
}

} // namespace

KMeansResult kmeans(const Tensor& x, std::size_t k, const KMeansOptions& options)
{
    check_k(x, k);
    const Matrix pts = to_rows(x);
    Rng rng(options.seed);
    const std::size_t restarts = std::max<std::size_t>(1, options.restarts);

    KMeansResult best;
    bool have = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng restart_rng(rng.fork());
        LloydRun run = lloyd(pts, plus_plus(pts, k, restart_rng), std::max<std::size_t>(1, options.max_iter));
        if (!have || run.inertia < best.inertia) {
            have = true;
            best.partition = Partition{std::move(run.labels), k};
            best.inertia = run.inertia;
            best.centers = std::move(run.centers);
            best.inertia_trace = std::move(run.trace);
            best.iterations = run.iterations;
            best.best_restart = r;
        }
    }
    return best;
}

GmmResult gmm_fit(const Tensor& x, std::size_t k, const GmmOptions& options)
{
    check_k(x, k);
    const Matrix pts = to_rows(x);
    const std::size_t n = pts.size();
    const std::size_t dim = pts.front().size();
    const double floor = options.var_floor;

    const KMeansResult init = kmeans(x, k, {options.init_restarts, 300, options.seed});
    GmmModel model;
    model.means = init.centers;
    model.weights.assign(k, 0.0);
    model.variances.assign(k, std::vector<double>(dim, 0.0));
    {
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(init.partition.assignments[i]);
            counts[c] += 1;
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = pts[i][j] - model.means[c][j];
                model.variances[c][j] += d * d;
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            model.weights[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
            for (std::size_t j = 0; j < dim; ++j) {
                model.variances[c][j] = std::max(floor, model.variances[c][j] / static_cast<double>(counts[c]));
            }
        }
    }

    const double log_2pi = std::log(2.0 * 3.14159265358979323846);
    std::vector<std::vector<double>> resp(n, std::vector<double>(k));
    GmmResult result;
    double prev = -std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        // E-step.
        std::vector<double> log_norm(k);
        for (std::size_t c = 0; c < k; ++c) {
            double s = 0.0;
            for (double v : model.variances[c]) {
                s += std::log(v);
            }
            log_norm[c] = std::log(model.weights[c]) - 0.5 * (static_cast<double>(dim) * log_2pi + s);
        }
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double hi = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double q = 0.0;
                for (std::size_t j = 0; j < dim; ++j) {
                    const double d = pts[i][j] - model.means[c][j];
                    q += d * d / model.variances[c][j];
                }
                resp[i][c] = log_norm[c] - 0.5 * q;
                hi = std::max(hi, resp[i][c]);
            }
            double total = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                total += std::exp(resp[i][c] - hi);
            }
            const double lse = hi + std::log(total);
            ll += lse;
            for (std::size_t c = 0; c < k; ++c) {
                resp[i][c] = std::exp(resp[i][c] - lse);
            }
        }
        ll /= static_cast<double>(n);
        if (!std::isfinite(ll)) {
            throw NumericalError("GMM log-likelihood became non-finite at iteration " + std::to_string(iter));
        }
        result.log_likelihood.push_back(ll);
        result.iterations = iter + 1;
        if (iter > 0 && std::abs(ll - prev) <= options.tol * std::abs(prev)) {
            break;
        }
        prev = ll;

        // M-step.
        for (std::size_t c = 0; c < k; ++c) {
            double nk = 0.0;
            std::vector<double> mean(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                nk += resp[i][c];
                for (std::size_t j = 0; j < dim; ++j) {
                    mean[j] += resp[i][c] * pts[i][j];
                }
            }
            model.weights[c] = nk / static_cast<double>(n);
            if (nk <= 0.0) {
                continue;
            }
            for (double& v : mean) {
                v /= nk;
            }
            std::vector<double> var(dim, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < dim; ++j) {
                    const double d = pts[i][j] - mean[j];
                    var[j] += resp[i][c] * d * d;
                }
            }
            for (std::size_t j = 0; j < dim; ++j) {
                var[j] = std::max(floor, var[j] / nk);
            }
            model.means[c] = std::move(mean);
            model.variances[c] = std::move(var);
        }
    }

    // Normalize the weights so they sum to one despite rounding.
    double wsum = 0.0;
    for (double w : model.weights) {
        wsum += w;
    }
    for (double& w : model.weights) {
        w /= wsum;
    }

    result.partition.k = k;
    result.partition.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.partition.assignments[i] =
            static_cast<int>(std::max_element(resp[i].begin(), resp[i].end()) - resp[i].begin());
    }
    result.model = std::move(model);
    return result;
}

Projection pca2(const Tensor& x)
{
    if (x.rank() != 2 || x.rows() < 2) {
        throw ArgumentError("PCA needs at least two samples");
    }
    const auto n = static_cast<Eigen::Index>(x.rows());
    const auto dim = static_cast<Eigen::Index>(x.cols());
    Eigen::MatrixXd data(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            data(i, j) = x(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    data.rowwise() -= data.colwise().mean();

    Projection out;
    out.coords = Tensor({x.rows(), 2});
    const Eigen::MatrixXd cov = (data.transpose() * data) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const double top = evals(dim - 1);
    if (!(top > 1e-12 * std::max(1.0, cov.trace()))) {
        out.degenerate = true;
        out.explained_variance = {0.0, 0.0};
        return out;
    }
    for (int c = 0; c < 2; ++c) {
        const Eigen::Index idx = dim - 1 - c;
        if (idx < 0) {
            out.explained_variance.push_back(0.0);
            continue;
        }
        Eigen::VectorXd dir = solver.eigenvectors().col(idx);
        Eigen::Index arg = 0;
        dir.cwiseAbs().maxCoeff(&arg);
        if (dir(arg) < 0.0) {
            dir = -dir;
        }
        const double ev = std::max(0.0, evals(idx));
        out.explained_variance.push_back(ev);
        const Eigen::VectorXd proj = data * dir;
        for (Eigen::Index i = 0; i < n; ++i) {
            out.coords(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) = static_cast<float>(proj(i));
        }
    }
    return out;
}

Tensor standardize(const Tensor& x)
{
    Tensor out = x;
    const std::size_t n = x.rows();
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += x(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const double centered = x(i, j) - mean;
            out(i, j) = static_cast<float>(sd > 0.0 ? centered / sd : centered);
        }
    }
    return out;
}

} // namespace hypercluster
