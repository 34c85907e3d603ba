#include "rdp/hull.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "rdp/errors.hpp"

namespace rdp {

namespace {

Point3 sub(const Point3& a, const Point3& b)
{
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

Point3 cross(const Point3& a, const Point3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double dot(const Point3& a, const Point3& b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const Point3& a)
{
    return std::sqrt(dot(a, a));
}

struct Face {
    HullFacet f;
    std::vector<std::size_t> outside;
    bool alive = true;
    std::size_t visit = 0;
};

std::uint64_t edge_key(std::size_t a, std::size_t b)
{
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

class QuickHull {
public:
    QuickHull(const std::vector<Point3>& pts, double eps) : pts_(pts), eps_(eps) {}

    std::vector<HullFacet> run()
    {
        require(pts_.size() >= 4, "convex hull needs at least four points");
        require(pts_.size() < (std::size_t{1} << 32), "too many points for the hull");
        initial_simplex();
        for (std::size_t k = 0; k < faces_.size(); ++k) {
            while (faces_[k].alive && !faces_[k].outside.empty()) {
                expand(k);
            }
        }
        std::vector<HullFacet> out;
        for (const Face& fc : faces_) {
            if (fc.alive) {
                out.push_back(fc.f);
            }
        }
        return out;
    }

private:
    double dist(const HullFacet& f, std::size_t p) const { return dot(f.normal, pts_[p]) - f.offset; }

    std::size_t make_face(std::size_t a, std::size_t b, std::size_t c)
    {
        Face fc;
        fc.f.v = {a, b, c};
        Point3 n = cross(sub(pts_[b], pts_[a]), sub(pts_[c], pts_[a]));
        const double len = norm(n);
        if (len > 0.0) {
            n = {n.x / len, n.y / len, n.z / len};
        }
        fc.f.normal = n;
        fc.f.offset = dot(n, pts_[a]);
        faces_.push_back(std::move(fc));
        const std::size_t id = faces_.size() - 1;
        edges_[edge_key(a, b)] = id;
        edges_[edge_key(b, c)] = id;
        edges_[edge_key(c, a)] = id;
        return id;
    }

    void initial_simplex()
    {
        const std::size_t n = pts_.size();
        std::size_t i0 = 0;
        std::size_t i1 = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (pts_[i].x < pts_[i0].x) i0 = i;
            if (pts_[i].x > pts_[i1].x) i1 = i;
        }
        if (i0 == i1) {
            i1 = i0 == 0 ? 1 : 0;
        }
        const Point3 dir = sub(pts_[i1], pts_[i0]);
        std::size_t i2 = n;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = norm(cross(dir, sub(pts_[i], pts_[i0])));
            if (d > best) {
                best = d;
                i2 = i;
            }
        }
        require(i2 < n && best > eps_, "hull input is degenerate (collinear)");
        const Point3 nrm = cross(dir, sub(pts_[i2], pts_[i0]));
        std::size_t i3 = n;
        best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::abs(dot(nrm, sub(pts_[i], pts_[i0]))) / norm(nrm);
            if (d > best) {
                best = d;
                i3 = i;
            }
        }
        require(i3 < n && best > eps_, "hull input is degenerate (coplanar)");

        const Point3 centre = {(pts_[i0].x + pts_[i1].x + pts_[i2].x + pts_[i3].x) / 4.0,
                               (pts_[i0].y + pts_[i1].y + pts_[i2].y + pts_[i3].y) / 4.0,
                               (pts_[i0].z + pts_[i1].z + pts_[i2].z + pts_[i3].z) / 4.0};
        // Orient so the apex i3 lies below the base face.
        if (dot(cross(sub(pts_[i1], pts_[i0]), sub(pts_[i2], pts_[i0])), sub(pts_[i3], pts_[i0])) > 0.0) {
            std::swap(i1, i2);
        }
        make_face(i0, i1, i2);
        make_face(i0, i3, i1);
        make_face(i1, i3, i2);
        make_face(i2, i3, i0);
        for (const Face& fc : faces_) {
            if (dot(fc.f.normal, centre) - fc.f.offset > 0.0) {
                throw InputError("hull orientation failed");
            }
        }
        const std::size_t initial[4] = {i0, i1, i2, i3};
        for (std::size_t p = 0; p < n; ++p) {
            if (std::find(std::begin(initial), std::end(initial), p) != std::end(initial)) {
                continue;
            }
            assign(p, 0, faces_.size());
        }
    }

    // Puts p on the outside set of the first face in [from, to) it lies above.
    void assign(std::size_t p, std::size_t from, std::size_t to)
    {
        for (std::size_t k = from; k < to; ++k) {
            if (faces_[k].alive && dist(faces_[k].f, p) > eps_) {
                faces_[k].outside.push_back(p);
                return;
            }
        }
    }

    void expand(std::size_t start)
    {
        Face& seed = faces_[start];
        std::size_t apex = seed.outside.front();
        double far = dist(seed.f, apex);
        for (std::size_t p : seed.outside) {
            const double d = dist(seed.f, p);
            if (d > far) {
                far = d;
                apex = p;
            }
        }

        // Visible region by flood fill from the seed face.
        ++stamp_;
        std::vector<std::size_t> visible{start};
        faces_[start].visit = stamp_;
        for (std::size_t q = 0; q < visible.size(); ++q) {
            const HullFacet f = faces_[visible[q]].f;
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = f.v[e];
                const std::size_t b = f.v[(e + 1) % 3];
                const std::size_t nb = edges_.at(edge_key(b, a));
                if (faces_[nb].visit != stamp_ && dist(faces_[nb].f, apex) > eps_) {
                    faces_[nb].visit = stamp_;
                    visible.push_back(nb);
                }
            }
        }

        std::vector<std::pair<std::size_t, std::size_t>> horizon;
        for (std::size_t id : visible) {
            const HullFacet f = faces_[id].f;
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = f.v[e];
                const std::size_t b = f.v[(e + 1) % 3];
                if (faces_[edges_.at(edge_key(b, a))].visit != stamp_) {
                    horizon.emplace_back(a, b);
                }
            }
        }

        std::vector<std::size_t> orphans;
        for (std::size_t id : visible) {
            Face& fc = faces_[id];
            fc.alive = false;
            for (std::size_t p : fc.outside) {
                if (p != apex) {
                    orphans.push_back(p);
                }
            }
            fc.outside.clear();
            fc.outside.shrink_to_fit();
            for (int e = 0; e < 3; ++e) {
                const std::size_t a = fc.f.v[e];
                const std::size_t b = fc.f.v[(e + 1) % 3];
                const auto it = edges_.find(edge_key(a, b));
                if (it != edges_.end() && it->second == id) {
                    edges_.erase(it);
                }
            }
        }

        const std::size_t first_new = faces_.size();
        for (const auto& [a, b] : horizon) {
            make_face(a, b, apex);
        }
        for (std::size_t p : orphans) {
            assign(p, first_new, faces_.size());
        }
    }

    const std::vector<Point3>& pts_;
    double eps_;
    std::vector<Face> faces_;
    std::unordered_map<std::uint64_t, std::size_t> edges_;
    std::size_t stamp_ = 0;
};

} // namespace

std::vector<HullFacet> convex_hull_3d(const std::vector<Point3>& pts, double eps)
{
    return QuickHull(pts, eps).run();
}

} // namespace rdp
