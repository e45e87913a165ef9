#include "ppx/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppx/errors.hpp"
#include "ppx/rng.hpp"

namespace ppx {

namespace {

struct LatticeSite {
    std::array<long long, 3> u{0, 0, 0};
    Point x;
};

// Half the longest diagonal of the fundamental cell bounds the Voronoi cell
// circumradius, so the cube of this radius around a site covers its cell.
double cell_circumradius(const Matrix& G) {
    double best = 0.0;
    const int dim = G.dim;
    const int combos = 1 << (dim - 1);
    for (int mask = 0; mask < combos; ++mask) {
        Point v;
        v[dim - 1] = 1.0;
        for (int axis = 0; axis < dim - 1; ++axis) {
            v[axis] = (mask >> axis) & 1 ? 1.0 : -1.0;
        }
        const Point d = G.apply(v);
        double norm2 = 0.0;
        for (int axis = 0; axis < dim; ++axis) norm2 += d[axis] * d[axis];
        best = std::max(best, norm2);
    }
    return 0.5 * std::sqrt(best);
}

double distance_to_box(const Point& p, const Window& window) {
    double norm2 = 0.0;
    for (int axis = 0; axis < window.dim; ++axis) {
        const double below = window.lower[axis] - p[axis];
        const double above = p[axis] - window.upper[axis];
        const double d = std::max({below, above, 0.0});
        norm2 += d * d;
    }
    return std::sqrt(norm2);
}

void require_toroidal_tiling(const Matrix& G, const Window& window) {
    for (int row = 0; row < G.dim; ++row) {
        for (int col = 0; col < G.dim; ++col) {
            if (row != col && std::abs(G.at(row, col)) > 1e-12) {
                throw SpecError(
                    "toroidal lattice requires a diagonal generator matrix");
            }
        }
        const double g = G.at(row, row);
        if (g <= 0.0) {
            throw SpecError("toroidal lattice requires positive diagonal entries");
        }
        const double ratio = window.side(row) / g;
        if (std::abs(ratio - std::round(ratio)) > 1e-9) {
            throw SpecError(
                "toroidal lattice must tile the window: side / G[i][i] integral");
        }
    }
}

std::vector<LatticeSite> enumerate_sites(const Matrix& G, const Window& window) {
    if (G.dim != window.dim) {
        throw SpecError("generator matrix dim must match window dim");
    }
    const int dim = window.dim;
    std::vector<LatticeSite> sites;

    if (window.metric == Metric::toroidal) {
        require_toroidal_tiling(G, window);
        std::array<long long, 3> start{0, 0, 0};
        std::array<long long, 3> count{1, 1, 1};
        for (int axis = 0; axis < dim; ++axis) {
            const double g = G.at(axis, axis);
            count[axis] = static_cast<long long>(std::round(window.side(axis) / g));
            start[axis] =
                static_cast<long long>(std::ceil(window.lower[axis] / g - 1e-9));
        }
        std::array<long long, 3> u{0, 0, 0};
        for (long long i = 0; i < count[0]; ++i) {
            u[0] = start[0] + i;
            for (long long j = 0; j < (dim > 1 ? count[1] : 1); ++j) {
                u[1] = start[1] + j;
                for (long long k = 0; k < (dim > 2 ? count[2] : 1); ++k) {
                    u[2] = start[2] + k;
                    Point p;
                    for (int axis = 0; axis < dim; ++axis) {
                        p[axis] = G.at(axis, axis) * static_cast<double>(u[axis]);
                    }
                    sites.push_back({u, window.wrap(p)});
                }
            }
        }
        return sites;
    }

    // Euclidean: enumerate the window's preimage under G, padded so every
    // cell that can meet the window is considered, then keep sites whose
    // cell actually meets it.
    const Matrix inv = G.inverse();
    std::array<double, 3> umin{};
    std::array<double, 3> umax{};
    umin.fill(std::numeric_limits<double>::infinity());
    umax.fill(-std::numeric_limits<double>::infinity());
    for (int mask = 0; mask < (1 << dim); ++mask) {
        Point corner;
        for (int axis = 0; axis < dim; ++axis) {
            corner[axis] =
                (mask >> axis) & 1 ? window.upper[axis] : window.lower[axis];
        }
        const Point pre = inv.apply(corner);
        for (int axis = 0; axis < dim; ++axis) {
            umin[axis] = std::min(umin[axis], pre[axis]);
            umax[axis] = std::max(umax[axis], pre[axis]);
        }
    }
    const double radius = cell_circumradius(G);
    std::array<long long, 3> lo{0, 0, 0};
    std::array<long long, 3> hi{0, 0, 0};
    for (int axis = 0; axis < dim; ++axis) {
        lo[axis] = static_cast<long long>(std::floor(umin[axis])) - 2;
        hi[axis] = static_cast<long long>(std::ceil(umax[axis])) + 2;
    }
    std::array<long long, 3> u{0, 0, 0};
    for (long long i = lo[0]; i <= hi[0]; ++i) {
        u[0] = i;
        for (long long j = (dim > 1 ? lo[1] : 0); j <= (dim > 1 ? hi[1] : 0); ++j) {
            u[1] = j;
            for (long long k = (dim > 2 ? lo[2] : 0); k <= (dim > 2 ? hi[2] : 0);
                 ++k) {
                u[2] = k;
                Point p;
                p[0] = static_cast<double>(u[0]);
                p[1] = static_cast<double>(u[1]);
                p[2] = static_cast<double>(u[2]);
                const Point x = G.apply(p);
                if (distance_to_box(x, window) <= radius + 1e-12) {
                    sites.push_back({u, x});
                }
            }
        }
    }
    return sites;
}

Point uniform_in_box(Rng& rng, int dim, const std::array<double, 3>& lower,
                     const std::array<double, 3>& upper) {
    Point p;
    for (int axis = 0; axis < dim; ++axis) {
        p[axis] = rng.uniform(lower[axis], upper[axis]);
    }
    return p;
}

void fill_poisson_uniform(Rng& rng, double mean_count, const Window& window,
                          std::vector<Point>& out) {
    const long long count = rng.poisson(mean_count);
    for (long long i = 0; i < count; ++i) {
        out.push_back(uniform_in_box(rng, window.dim, window.lower, window.upper));
    }
}

// Nearest lattice site to y in integer coordinates, searched around
// round(G^-1 y).  Returns false on a distance tie (the draw is rejected).
bool nearest_site(const Matrix& G, const Matrix& inv, const Point& y, int dim,
                  std::array<long long, 3>& best_u) {
    const Point pre = inv.apply(y);
    std::array<long long, 3> center{0, 0, 0};
    for (int axis = 0; axis < dim; ++axis) {
        center[axis] = static_cast<long long>(std::llround(pre[axis]));
    }
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    std::array<long long, 3> u{0, 0, 0};
    for (long long i = -2; i <= 2; ++i) {
        u[0] = center[0] + i;
        for (long long j = (dim > 1 ? -2 : 0); j <= (dim > 1 ? 2 : 0); ++j) {
            u[1] = center[1] + j;
            for (long long k = (dim > 2 ? -2 : 0); k <= (dim > 2 ? 2 : 0); ++k) {
                u[2] = center[2] + k;
                Point p;
                p[0] = static_cast<double>(u[0]);
                p[1] = static_cast<double>(u[1]);
                p[2] = static_cast<double>(u[2]);
                const Point x = G.apply(p);
                double d2 = 0.0;
                for (int axis = 0; axis < dim; ++axis) {
                    const double d = x[axis] - y[axis];
                    d2 += d * d;
                }
                if (d2 < best) {
                    second = best;
                    best = d2;
                    best_u = u;
                } else if (d2 < second) {
                    second = d2;
                }
            }
        }
    }
    return second - best > 1e-12 * (1.0 + best);
}

void sample_perturbed_lattice(const ProcessSpec& spec, const Window& window,
                              Rng& rng, std::vector<Point>& out) {
    const std::vector<LatticeSite> sites = enumerate_sites(spec.G, window);
    const Matrix inv = spec.G.inverse();
    const double radius = cell_circumradius(spec.G);
    const bool toroidal = window.metric == Metric::toroidal;
    for (const LatticeSite& site : sites) {
        const long long replicas = spec.replicas.sample(rng);
        for (long long rep = 0; rep < replicas; ++rep) {
            // Rejection: uniform in the covering cube, accept when this site
            // is the strict nearest lattice point.
            Point daughter;
            bool accepted = false;
            for (int attempt = 0; attempt < 100000; ++attempt) {
                Point y;
                for (int axis = 0; axis < window.dim; ++axis) {
                    // Unwrapped site position: G u, even when the site was
                    // wrapped into a toroidal window.
                    double sx = 0.0;
                    for (int col = 0; col < window.dim; ++col) {
                        sx += spec.G.at(axis, col) * static_cast<double>(site.u[col]);
                    }
                    y[axis] = sx + rng.uniform(-radius, radius);
                }
                std::array<long long, 3> best_u{};
                if (!nearest_site(spec.G, inv, y, window.dim, best_u)) continue;
                if (best_u != site.u) continue;
                daughter = y;
                accepted = true;
                break;
            }
            if (!accepted) {
                throw NumericError("voronoi rejection sampling failed to accept");
            }
            if (toroidal) {
                out.push_back(window.wrap(daughter));
            } else if (window.contains(daughter)) {
                out.push_back(daughter);
            }
        }
    }
}

void sample_cluster(const ProcessSpec& spec, const Window& window,
                    std::uint64_t seed, Rng& rng, const SamplerOptions& options,
                    std::vector<Point>& out) {
    Window parent_window = window;
    if (window.metric == Metric::euclidean) {
        const std::array<double, 3> pad = spec.representative.dilation(window.dim);
        for (int axis = 0; axis < window.dim; ++axis) {
            parent_window.lower[axis] -= pad[axis];
            parent_window.upper[axis] += pad[axis];
        }
    }
    const PointPattern parents =
        sample(*spec.parent, parent_window, mix_seed(seed, 0xC1A57E01ULL), options);
    for (const Point& parent : parents.points) {
        const long long daughters = spec.representative.count.sample(rng);
        for (long long i = 0; i < daughters; ++i) {
            const Point offset =
                spec.representative.sample_offset(window.dim, rng);
            Point y = parent;
            for (int axis = 0; axis < window.dim; ++axis) y[axis] += offset[axis];
            if (window.metric == Metric::toroidal) {
                out.push_back(window.wrap(y));
            } else if (window.contains(y)) {
                out.push_back(y);
            }
        }
    }
}

// Expected-count bound used by the allocation guard.  Unlike
// intensity_measure this never throws for geometric reasons; it only has to
// be a faithful order-of-magnitude estimate.
double expected_count_estimate(const ProcessSpec& spec, const Window& window) {
    switch (spec.kind) {
        case ProcessSpec::Kind::mixed_binomial:
            return spec.N.mean();
        case ProcessSpec::Kind::cluster: {
            Window parent_window = window;
            if (window.metric == Metric::euclidean) {
                const std::array<double, 3> pad =
                    spec.representative.dilation(window.dim);
                for (int axis = 0; axis < window.dim; ++axis) {
                    parent_window.lower[axis] -= pad[axis];
                    parent_window.upper[axis] += pad[axis];
                }
            }
            return expected_count_estimate(*spec.parent, parent_window) *
                   spec.representative.count.mean();
        }
        default:
            return spec.density() * window.volume();
    }
}

}  // namespace

std::vector<Point> lattice_points(const Matrix& G, const Window& window) {
    window.validate();
    G.inverse();  // throws when singular
    std::vector<LatticeSite> sites = enumerate_sites(G, window);
    std::vector<Point> points;
    points.reserve(sites.size());
    for (const LatticeSite& site : sites) points.push_back(site.x);
    return points;
}

double intensity_measure(const ProcessSpec& spec, const Window& window) {
    window.validate();
    spec.validate(window.dim);
    switch (spec.kind) {
        case ProcessSpec::Kind::stationary_poisson:
        case ProcessSpec::Kind::mixed_poisson:
        case ProcessSpec::Kind::cox_grid:
        case ProcessSpec::Kind::perturbed_lattice:
            return spec.density() * window.volume();
        case ProcessSpec::Kind::cluster:
            if (spec.parent->kind == ProcessSpec::Kind::mixed_binomial) {
                // Parents are window-bound, not stationary: exact only when
                // daughters cannot escape (toroidal wrap).
                if (window.metric != Metric::toroidal) {
                    throw SpecError(
                        "cluster over mixed_binomial parents has a closed-form "
                        "mean count only on toroidal windows");
                }
                return spec.parent->N.mean() * spec.representative.count.mean();
            }
            return spec.density() * window.volume();
        case ProcessSpec::Kind::mixed_binomial:
            return spec.N.mean();
        case ProcessSpec::Kind::lattice: {
            const std::vector<LatticeSite> sites = enumerate_sites(spec.G, window);
            if (window.metric == Metric::toroidal) {
                return static_cast<double>(sites.size());
            }
            long long inside = 0;
            for (const LatticeSite& site : sites) {
                if (window.contains(site.x)) ++inside;
            }
            return static_cast<double>(inside);
        }
    }
    throw SpecError("unreachable process kind");
}

PointPattern sample(const ProcessSpec& spec, const Window& window,
                    std::uint64_t seed, const SamplerOptions& options) {
    window.validate();
    spec.validate(window.dim);
    const double expected = expected_count_estimate(spec, window);
    if (!(expected <= options.max_expected_count)) {
        throw NumericError("expected point count exceeds the sampler cap");
    }

    PointPattern pattern;
    pattern.window = window;
    pattern.seed = seed;
    pattern.spec_id = spec.id();

    Rng rng(mix_seed(seed, stream::kSampler));
    switch (spec.kind) {
        case ProcessSpec::Kind::stationary_poisson:
            fill_poisson_uniform(rng, spec.lambda * window.volume(), window,
                                 pattern.points);
            break;
        case ProcessSpec::Kind::mixed_poisson: {
            std::vector<double> weights;
            weights.reserve(spec.table.size());
            for (const auto& row : spec.table) weights.push_back(row[1]);
            const double lambda = spec.table[rng.discrete(weights)][0];
            fill_poisson_uniform(rng, lambda * window.volume(), window,
                                 pattern.points);
            break;
        }
        case ProcessSpec::Kind::cox_grid: {
            std::array<int, 3> cells{1, 1, 1};
            for (int axis = 0; axis < window.dim; ++axis) {
                cells[axis] = spec.cells[axis];
            }
            Window cell = window;
            for (int i = 0; i < cells[0]; ++i) {
                for (int j = 0; j < cells[1]; ++j) {
                    for (int k = 0; k < cells[2]; ++k) {
                        const std::array<int, 3> index{i, j, k};
                        for (int axis = 0; axis < window.dim; ++axis) {
                            const double step =
                                window.side(axis) / static_cast<double>(cells[axis]);
                            cell.lower[axis] =
                                window.lower[axis] + step * index[axis];
                            cell.upper[axis] = cell.lower[axis] + step;
                        }
                        const double intensity = spec.cell_intensity.sample(rng);
                        fill_poisson_uniform(rng, intensity * cell.volume(), cell,
                                             pattern.points);
                    }
                }
            }
            break;
        }
        case ProcessSpec::Kind::cluster:
            sample_cluster(spec, window, seed, rng, options, pattern.points);
            break;
        case ProcessSpec::Kind::perturbed_lattice:
            sample_perturbed_lattice(spec, window, rng, pattern.points);
            break;
        case ProcessSpec::Kind::mixed_binomial: {
            const long long count = spec.N.sample(rng);
            for (long long i = 0; i < count; ++i) {
                pattern.points.push_back(
                    uniform_in_box(rng, window.dim, window.lower, window.upper));
            }
            break;
        }
        case ProcessSpec::Kind::lattice: {
            const std::vector<LatticeSite> sites = enumerate_sites(spec.G, window);
            for (const LatticeSite& site : sites) {
                if (window.metric == Metric::toroidal ||
                    window.contains(site.x)) {
                    pattern.points.push_back(site.x);
                }
            }
            break;
        }
    }
    return pattern;
}

}  // namespace ppx
