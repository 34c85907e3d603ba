#include "rdp/binary_rdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rdp/errors.hpp"
#include "rdp/hull.hpp"
#include "rdp/kernels.hpp"

namespace rdp {

namespace {

// Smaller root (1 + m - v) / 2 written without cancellation.
double lemma_a(double D, double m)
{
    const double v = std::sqrt(1.0 + m * m - 2.0 * D);
    return 0.5 * (m + (2.0 * D - m * m) / (1.0 + v));
}

} // namespace

double hbar(double D, double P)
{
    require(D >= 0.0 && P >= 0.0, "hbar needs D >= 0 and P >= 0");
    if (D >= 0.5) {
        return std::numbers::ln2;
    }
    const double m = std::min(D, P);
    return binary_entropy(std::clamp(lemma_a(D, m), 0.0, 0.5));
}

LemmaOptimum envelope_lemma_opt(double D, double P)
{
    require(D >= 0.0 && P >= 0.0, "envelope_lemma_opt needs D >= 0 and P >= 0");
    if (D >= 0.5) {
        return {std::numbers::ln2, 0.5, 0.5};
    }
    if (P >= D) {
        return {binary_entropy(D), D, 0.0};
    }
    const double a = std::clamp(lemma_a(D, P), 0.0, 0.5);
    const double a_hat = std::max(0.0, a - P);
    return {binary_entropy(a), a, a_hat};
}

std::array<std::array<double, 2>, 2> hbar_hessian(double D, double P)
{
    require(D > 0.0 && D < 0.5 && P > 0.0 && P < D, "hbar_hessian needs 0 < P < D < 1/2");
    const double v2 = 1.0 + P * P - 2.0 * D;
    require(v2 > 1e-10, "hbar_hessian: too close to the D = 1/2 singularity");
    const double v = std::sqrt(v2);
    const double w = 1.0 - (v - P) * (v - P);
    require(w > 1e-10, "hbar_hessian: too close to the region boundary");
    const double L = std::log((1.0 - P + v) / (1.0 + P - v));
    const double v3 = v2 * v;
    const double dd = L / (2.0 * v3) - 1.0 / (v2 * w);
    const double pp = -(1.0 - 2.0 * D) * L / (2.0 * v3) - (v - P) * (v - P) / (v2 * w);
    const double dp = -P * L / (2.0 * v3) - (v - P) / (v2 * w);
    return {{{dd, dp}, {dp, pp}}};
}

EnvelopeModel::EnvelopeModel(std::size_t grid_n, double d_max, std::vector<Point3> vertices,
                             std::vector<std::array<std::size_t, 3>> facets, std::size_t candidates)
    : grid_n_(grid_n), d_max_(d_max), vertices_(std::move(vertices)), facets_(std::move(facets)),
      candidates_(candidates)
{
    require(!facets_.empty(), "envelope has no facets");
    buckets_ = std::max<std::size_t>(1, grid_n_ / 8);
    bucket_facets_.assign(buckets_ * buckets_, {});
    const double scale = static_cast<double>(buckets_) / d_max_;
    auto cell = [&](double t) {
        const auto c = static_cast<std::ptrdiff_t>(std::floor(t * scale));
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(c, 0, static_cast<std::ptrdiff_t>(buckets_) - 1));
    };
    for (std::size_t f = 0; f < facets_.size(); ++f) {
        double x0 = std::numeric_limits<double>::infinity();
        double x1 = -x0;
        double y0 = x0;
        double y1 = -x0;
        for (std::size_t k : facets_[f]) {
            x0 = std::min(x0, vertices_[k].x);
            x1 = std::max(x1, vertices_[k].x);
            y0 = std::min(y0, vertices_[k].y);
            y1 = std::max(y1, vertices_[k].y);
        }
        for (std::size_t bx = cell(x0 - 1e-12); bx <= cell(x1 + 1e-12); ++bx) {
            for (std::size_t by = cell(y0 - 1e-12); by <= cell(y1 + 1e-12); ++by) {
                bucket_facets_[bx * buckets_ + by].push_back(f);
            }
        }
    }
}

std::size_t EnvelopeModel::locate(double D, double P, std::array<double, 3>& bary) const
{
    const double x = std::min(D, d_max_);
    const double y = std::min(P, d_max_);
    const double scale = static_cast<double>(buckets_) / d_max_;
    const auto bx = std::min(buckets_ - 1, static_cast<std::size_t>(x * scale));
    const auto by = std::min(buckets_ - 1, static_cast<std::size_t>(y * scale));

    std::size_t best = facets_.size();
    double best_min = -std::numeric_limits<double>::infinity();
    auto test = [&](std::size_t f) {
        const Point3& a = vertices_[facets_[f][0]];
        const Point3& b = vertices_[facets_[f][1]];
        const Point3& c = vertices_[facets_[f][2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double l1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / det;
        const double l0 = 1.0 - l1 - l2;
        const double lo = std::min({l0, l1, l2});
        if (lo > best_min) {
            best_min = lo;
            best = f;
            bary = {l0, l1, l2};
        }
    };
    for (std::size_t f : bucket_facets_[bx * buckets_ + by]) {
        test(f);
    }
    if (best_min < -1e-9) {
        for (std::size_t f = 0; f < facets_.size(); ++f) {
            test(f);
        }
    }
    for (double& l : bary) {
        l = std::max(l, 0.0);
    }
    const double s = bary[0] + bary[1] + bary[2];
    for (double& l : bary) {
        l /= s;
    }
    return best;
}

double EnvelopeModel::value(double D, double P) const
{
    require(D >= 0.0 && P >= 0.0, "envelope queries need D >= 0 and P >= 0");
    if (D >= 0.5) {
        return std::numbers::ln2;
    }
    std::array<double, 3> bary{};
    const std::size_t f = locate(D, P, bary);
    double z = 0.0;
    for (int k = 0; k < 3; ++k) {
        z += bary[k] * vertices_[facets_[f][k]].z;
    }
    return std::min(z, std::numbers::ln2);
}

EnvelopeDecomposition EnvelopeModel::decompose(double D, double P) const
{
    require(D >= 0.0 && P >= 0.0, "envelope queries need D >= 0 and P >= 0");
    EnvelopeDecomposition out;
    std::array<double, 3> bary{};
    const std::size_t f = locate(D, P, bary);
    for (int k = 0; k < 3; ++k) {
        out.points[k] = vertices_[facets_[f][k]];
        out.weights[k] = bary[k];
        out.value += bary[k] * out.points[k].z;
    }
    out.value = std::min(out.value, std::numbers::ln2);
    return out;
}

EnvelopeModel build_envelope(std::size_t grid_n, double d_max, bool parallel)
{
    require(grid_n >= 16, "envelope grid must have at least 16 intervals");
    require(d_max >= 0.5, "envelope domain must reach D = 1/2");
    const std::size_t m = grid_n + 1;
    const auto z = parallel ? kernels::omp::hbar_grid(grid_n, d_max) : kernels::serial::hbar_grid(grid_n, d_max);
    const auto mask = parallel ? kernels::omp::hull_candidate_mask(grid_n, z)
                               : kernels::serial::hull_candidate_mask(grid_n, z);

    std::vector<Point3> cloud;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (mask[i * m + j]) {
                cloud.push_back({d_max * static_cast<double>(i) / static_cast<double>(grid_n),
                                 d_max * static_cast<double>(j) / static_cast<double>(grid_n), z[i * m + j]});
            }
        }
    }
    const std::size_t candidates = cloud.size();
    // Floor under the corners keeps the hull solid; its facets face downwards.
    for (double x : {0.0, d_max}) {
        for (double y : {0.0, d_max}) {
            cloud.push_back({x, y, -1.0});
        }
    }
    const auto hull = convex_hull_3d(cloud, 1e-12);

    std::vector<std::size_t> remap(cloud.size(), cloud.size());
    std::vector<Point3> vertices;
    std::vector<std::array<std::size_t, 3>> facets;
    for (const HullFacet& f : hull) {
        if (f.normal.z <= 1e-9) {
            continue;
        }
        std::array<std::size_t, 3> tri{};
        for (int k = 0; k < 3; ++k) {
            std::size_t& slot = remap[f.v[k]];
            if (slot == cloud.size()) {
                slot = vertices.size();
                vertices.push_back(cloud[f.v[k]]);
            }
            tri[k] = slot;
        }
        facets.push_back(tri);
    }
    return EnvelopeModel(grid_n, d_max, std::move(vertices), std::move(facets), candidates);
}

double rate_binary(double D, double P, const EnvelopeModel& env)
{
    return std::max(0.0, std::numbers::ln2 - env.value(D, P));
}

SymmetricConstruction symmetric_construction(const EnvelopeModel& env, double D, double P)
{
    const EnvelopeDecomposition dec = env.decompose(D, P);
    std::vector<double> pu(6);
    Matrix back(6, 2);
    Matrix decoder(6, 2);
    for (std::size_t k = 0; k < 3; ++k) {
        const LemmaOptimum opt = envelope_lemma_opt(dec.points[k].x, dec.points[k].y);
        pu[k] = pu[k + 3] = dec.weights[k] / 2.0;
        back(k, 1) = opt.a;
        back(k, 0) = 1.0 - opt.a;
        back(k + 3, 1) = 1.0 - opt.a;
        back(k + 3, 0) = opt.a;
        decoder(k, 1) = opt.a_hat;
        decoder(k, 0) = 1.0 - opt.a_hat;
        decoder(k + 3, 1) = 1.0 - opt.a_hat;
        decoder(k + 3, 0) = opt.a_hat;
    }
    // X ~ Ber(1/2), so p(u | x) = 2 p(u) p(x | u).
    Matrix encoder(2, 6);
    for (std::size_t u = 0; u < 6; ++u) {
        for (std::size_t x = 0; x < 2; ++x) {
            encoder(x, u) = 2.0 * pu[u] * back(u, x);
        }
    }
    SymmetricConstruction out{ProbVector(pu), Channel(encoder), Channel(decoder), Channel(back), 0.0, 0.0, 0.0};
    const ProbVector px = ProbVector::uniform(2);
    out.rate = mutual_information(px, out.encoder);
    for (std::size_t u = 0; u < 6; ++u) {
        const double a = back(u, 1);
        const double ah = decoder(u, 1);
        out.distortion += pu[u] * ((1.0 - a) * ah + a * (1.0 - ah));
        out.perception += pu[u] * std::abs(a - ah);
    }
    return out;
}

} // namespace rdp
