#include "dimcert/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dimcert/parallel.hpp"

namespace dimcert {

namespace {

// Template simplices per cell. 2D: two triangles, diagonal by cell parity.
// 3D: Freudenthal subdivision, six tetrahedra around the main diagonal; every
// cube is cut identically so shared faces agree across cells.
struct TemplateDef {
    int corners[4][3];
};

// 2D templates: 0,1 = parity 0 (diagonal (0,0)-(1,1)); 2,3 = parity 1.
const TemplateDef kTri[4] = {
    {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 0, 0}}},
    {{{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}}},
    {{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 0}}},
    {{{1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 0}}},
};

const int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

TemplateDef tet_template(int t) {
    TemplateDef d{};
    int acc[3] = {0, 0, 0};
    for (int v = 1; v <= 3; ++v) {
        acc[kPerm[t][v - 1]] = 1;
        for (int a = 0; a < 3; ++a) d.corners[v][a] = acc[a];
    }
    return d;
}

// Analytic barycentric coordinates of local fractions within a template.
// Returns min lambda; fills lam.
double tri_bary(int tmpl, double fx, double fy, double* lam) {
    switch (tmpl) {
    case 0: lam[0] = 1 - fx; lam[1] = fx - fy; lam[2] = fy; break;
    case 1: lam[0] = 1 - fy; lam[1] = fx; lam[2] = fy - fx; break;
    case 2: lam[0] = 1 - fx - fy; lam[1] = fx; lam[2] = fy; break;
    default: lam[0] = 1 - fy; lam[1] = fy - 1 + fx; lam[2] = 1 - fx; break;
    }
    return std::min(lam[0], std::min(lam[1], lam[2]));
}

double tet_bary(int tmpl, const double f[3], double* lam) {
    const int* p = kPerm[tmpl];
    lam[0] = 1 - f[p[0]];
    lam[1] = f[p[0]] - f[p[1]];
    lam[2] = f[p[1]] - f[p[2]];
    lam[3] = f[p[2]];
    return std::min(std::min(lam[0], lam[1]), std::min(lam[2], lam[3]));
}

double dist_point_segment(const Vec& p, const Vec& a, const Vec& b) {
    Vec ab = b - a;
    double t = dot(p - a, ab) / std::max(norm2(ab), 1e-300);
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

double dist_point_triangle(const Vec& p, const Vec& a, const Vec& b, const Vec& c, int n) {
    if (n == 2) {
        // inside test via signed areas
        auto cr = [](const Vec& u, const Vec& v) { return u[0] * v[1] - u[1] * v[0]; };
        double d1 = cr(b - a, p - a), d2 = cr(c - b, p - b), d3 = cr(a - c, p - c);
        bool neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
        bool pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
        if (!(neg && pos)) return 0.0;
    } else {
        // closest point on triangle in 3D (Ericson)
        Vec ab = b - a, ac = c - a, ap = p - a;
        double d1 = dot(ab, ap), d2 = dot(ac, ap);
        if (d1 <= 0 && d2 <= 0) return norm(p - a);
        Vec bp = p - b;
        double d3 = dot(ab, bp), d4 = dot(ac, bp);
        if (d3 >= 0 && d4 <= d3) return norm(p - b);
        double vc = d1 * d4 - d3 * d2;
        if (vc <= 0 && d1 >= 0 && d3 <= 0) return norm(p - (a + ab * (d1 / (d1 - d3))));
        Vec cp = p - c;
        double d5 = dot(ab, cp), d6 = dot(ac, cp);
        if (d6 >= 0 && d5 <= d6) return norm(p - c);
        double vb = d5 * d2 - d1 * d6;
        if (vb <= 0 && d2 >= 0 && d6 <= 0) return norm(p - (a + ac * (d2 / (d2 - d6))));
        double va = d3 * d6 - d5 * d4;
        if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
            return norm(p - (b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)))));
        double denom = 1.0 / (va + vb + vc);
        Vec q = a + ab * (vb * denom) + ac * (vc * denom);
        return norm(p - q);
    }
    return std::min({dist_point_segment(p, a, b), dist_point_segment(p, b, c),
                     dist_point_segment(p, c, a)});
}

double simplex_volume(const Vec* v, int n) {
    if (n == 2) {
        Vec u = v[1] - v[0], w = v[2] - v[0];
        return 0.5 * std::abs(u[0] * w[1] - u[1] * w[0]);
    }
    Vec a = v[1] - v[0], b = v[2] - v[0], c = v[3] - v[0];
    double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                 a[2] * (b[0] * c[1] - b[1] * c[0]);
    return std::abs(det) / 6.0;
}

double simplex_diameter(const Vec* v, int n) {
    double d = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) d = std::max(d, norm(v[i] - v[j]));
    return d;
}

bool simplex_intersects_ball(const Vec* v, int n, const Vec& c, double r) {
    for (int i = 0; i <= n; ++i)
        if (norm(v[i] - c) <= r) return true;
    if (n == 2) return dist_point_triangle(c, v[0], v[1], v[2], 2) <= r;
    // tetra: inside test by barycentric, else min over faces
    Vec a = v[1] - v[0], b = v[2] - v[0], d = v[3] - v[0], p = c - v[0];
    double det = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) +
                 a[2] * (b[0] * d[1] - b[1] * d[0]);
    if (std::abs(det) > 1e-300) {
        double inv = 1.0 / det;
        double m1 = (p[0] * (b[1] * d[2] - b[2] * d[1]) - p[1] * (b[0] * d[2] - b[2] * d[0]) +
                     p[2] * (b[0] * d[1] - b[1] * d[0])) * inv;
        double m2 = (a[0] * (p[1] * d[2] - p[2] * d[1]) - a[1] * (p[0] * d[2] - p[2] * d[0]) +
                     a[2] * (p[0] * d[1] - p[1] * d[0])) * inv;
        double m3 = (a[0] * (b[1] * p[2] - b[2] * p[1]) - a[1] * (b[0] * p[2] - b[2] * p[0]) +
                     a[2] * (b[0] * p[1] - b[1] * p[0])) * inv;
        if (m1 >= 0 && m2 >= 0 && m3 >= 0 && m1 + m2 + m3 <= 1) return true;
    }
    double dist = std::min(std::min(dist_point_triangle(c, v[0], v[1], v[2], 3),
                                    dist_point_triangle(c, v[0], v[1], v[3], 3)),
                           std::min(dist_point_triangle(c, v[0], v[2], v[3], 3),
                                    dist_point_triangle(c, v[1], v[2], v[3], 3)));
    return dist <= r;
}

// General barycentric against actual node coordinates (snapped or loaded meshes).
double general_bary(const Mesh& mesh, int64_t s, const Vec& x, double* lam) {
    const int32_t* nd = mesh.simplex_nodes(s);
    const Vec& p0 = mesh.nodes[static_cast<size_t>(nd[0])];
    if (mesh.n == 2) {
        Vec u = mesh.nodes[static_cast<size_t>(nd[1])] - p0;
        Vec w = mesh.nodes[static_cast<size_t>(nd[2])] - p0;
        Vec r = x - p0;
        double det = u[0] * w[1] - u[1] * w[0];
        if (std::abs(det) < 1e-300) { lam[0] = -1; return -1; }
        double m1 = (r[0] * w[1] - r[1] * w[0]) / det;
        double m2 = (u[0] * r[1] - u[1] * r[0]) / det;
        lam[0] = 1 - m1 - m2; lam[1] = m1; lam[2] = m2;
        return std::min(lam[0], std::min(lam[1], lam[2]));
    }
    Vec a = mesh.nodes[static_cast<size_t>(nd[1])] - p0;
    Vec b = mesh.nodes[static_cast<size_t>(nd[2])] - p0;
    Vec d = mesh.nodes[static_cast<size_t>(nd[3])] - p0;
    Vec p = x - p0;
    double det = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) +
                 a[2] * (b[0] * d[1] - b[1] * d[0]);
    if (std::abs(det) < 1e-300) { lam[0] = -1; return -1; }
    double inv = 1.0 / det;
    double m1 = (p[0] * (b[1] * d[2] - b[2] * d[1]) - p[1] * (b[0] * d[2] - b[2] * d[0]) +
                 p[2] * (b[0] * d[1] - b[1] * d[0])) * inv;
    double m2 = (a[0] * (p[1] * d[2] - p[2] * d[1]) - a[1] * (p[0] * d[2] - p[2] * d[0]) +
                 a[2] * (p[0] * d[1] - p[1] * d[0])) * inv;
    double m3 = (a[0] * (b[1] * p[2] - b[2] * p[1]) - a[1] * (b[0] * p[2] - b[2] * p[0]) +
                 a[2] * (b[0] * p[1] - b[1] * p[0])) * inv;
    lam[0] = 1 - m1 - m2 - m3; lam[1] = m1; lam[2] = m2; lam[3] = m3;
    return std::min(std::min(lam[0], lam[1]), std::min(lam[2], lam[3]));
}

void clamp_and_fill(BarycentricLocation& loc, const double* lam, int n) {
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        loc.lambdas[static_cast<size_t>(i)] = std::max(lam[i], 0.0);
        sum += loc.lambdas[static_cast<size_t>(i)];
    }
    for (int i = 0; i <= n; ++i) loc.lambdas[static_cast<size_t>(i)] /= sum;
}

} // namespace

static Mesh build_mesh_impl(int n, const std::vector<Region>& x_regions,
                            const std::vector<Region>& cover, double target_h, double delta) {
    if (target_h <= 0) throw GeometryError("build_mesh: target_h must be positive");
    Mesh mesh;
    mesh.n = n;
    const double c = target_h / std::sqrt(static_cast<double>(n)) * (1.0 - 1e-12);
    const int tpl_per_cell = (n == 2) ? 2 : 6;

    for (size_t v = 0; v < cover.size(); ++v) {
        const Region& ball = cover[v];
        SubLattice lat;
        lat.cell = c;
        lat.node_base = mesh.node_count();
        lat.simplex_base = mesh.simplex_count();
        int dims[3] = {1, 1, 1}, nd[3] = {2, 2, 2};
        for (int a = 0; a < n; ++a) {
            lat.origin[a] = ball.center[a] - ball.radius - 2.0 * c;
            dims[a] = static_cast<int>(std::ceil(2.0 * (ball.radius + 2.0 * c) / c)) + 1;
            nd[a] = dims[a] + 1;
        }
        lat.dims = {dims[0], dims[1], dims[2]};
        lat.ndims = {nd[0], nd[1], nd[2]};
        int64_t ncells = 1, npts = 1;
        for (int a = 0; a < n; ++a) {
            ncells *= dims[a];
            npts *= nd[a];
        }
        auto pt = [&](int i, int j, int k) {
            return Vec{lat.origin[0] + c * i, lat.origin[1] + c * j,
                       n == 3 ? lat.origin[2] + c * k : 0.0};
        };
        auto pidx = [&](int i, int j, int k) {
            return (static_cast<int64_t>(k) * nd[1] + j) * nd[0] + i;
        };

        // pass 1: decide kept template simplices per cell
        std::vector<int8_t> keep(static_cast<size_t>(ncells) * tpl_per_cell, 0);
        int kz = (n == 3) ? dims[2] : 1;
        parallel_chunks(kz, [&](int64_t zb, int64_t ze, int) {
            Vec corners[4];
            for (int64_t k = zb; k < ze; ++k)
                for (int j = 0; j < dims[1]; ++j)
                    for (int i = 0; i < dims[0]; ++i) {
                        // cell-box quick tests
                        double lo2 = 0.0, hi2 = 0.0;
                        for (int a = 0; a < n; ++a) {
                            double b0 = lat.origin[a] + c * (a == 0 ? i : (a == 1 ? j : double(k)));
                            double b1 = b0 + c;
                            double d0 = ball.center[a] - std::clamp(ball.center[a], b0, b1);
                            lo2 += d0 * d0;
                            double far_ = std::max(std::abs(ball.center[a] - b0),
                                                   std::abs(ball.center[a] - b1));
                            hi2 += far_ * far_;
                        }
                        int64_t cell = (k * dims[1] + j) * dims[0] + i;
                        if (lo2 > ball.radius * ball.radius) continue;
                        bool whole = hi2 <= ball.radius * ball.radius;
                        for (int t = 0; t < tpl_per_cell; ++t) {
                            bool k2;
                            if (whole) {
                                k2 = true;
                            } else {
                                TemplateDef td = (n == 2) ? kTri[((i + j) & 1) * 2 + t]
                                                         : tet_template(t);
                                for (int q = 0; q <= n; ++q)
                                    corners[q] = pt(i + td.corners[q][0], j + td.corners[q][1],
                                                    static_cast<int>(k) + td.corners[q][2]);
                                k2 = simplex_intersects_ball(corners, n, ball.center, ball.radius);
                            }
                            if (k2) keep[static_cast<size_t>(cell * tpl_per_cell + t)] = 1;
                        }
                    }
        });

        // pass 2: assign node ids in lattice-point order
        lat.point_ids.assign(static_cast<size_t>(npts), -1);
        std::vector<int8_t> used(static_cast<size_t>(npts), 0);
        for (int64_t cell = 0; cell < ncells; ++cell) {
            int i = static_cast<int>(cell % dims[0]);
            int j = static_cast<int>((cell / dims[0]) % dims[1]);
            int k = static_cast<int>(cell / (static_cast<int64_t>(dims[0]) * dims[1]));
            for (int t = 0; t < tpl_per_cell; ++t) {
                if (!keep[static_cast<size_t>(cell * tpl_per_cell + t)]) continue;
                TemplateDef td = (n == 2) ? kTri[((i + j) & 1) * 2 + t] : tet_template(t);
                for (int q = 0; q <= n; ++q)
                    used[static_cast<size_t>(
                        pidx(i + td.corners[q][0], j + td.corners[q][1], k + td.corners[q][2]))] = 1;
            }
        }
        for (int64_t p = 0; p < npts; ++p) {
            if (!used[static_cast<size_t>(p)]) continue;
            lat.point_ids[static_cast<size_t>(p)] =
                static_cast<int32_t>(mesh.node_count() - lat.node_base);
            int i = static_cast<int>(p % nd[0]);
            int j = static_cast<int>((p / nd[0]) % nd[1]);
            int k = static_cast<int>(p / (static_cast<int64_t>(nd[0]) * nd[1]));
            mesh.nodes.push_back(pt(i, j, k));
            mesh.region_of_node.push_back(static_cast<int32_t>(v));
        }

        // snap nodes that escaped X_v(delta)
        const Region& xr = x_regions[v];
        for (int64_t nid = lat.node_base; nid < mesh.node_count(); ++nid) {
            Vec& p = mesh.nodes[static_cast<size_t>(nid)];
            double d = norm(p - xr.center);
            if (d > xr.radius + delta) {
                p = xr.center + (p - xr.center) * ((xr.radius + delta) / d);
                lat.pure_lattice = false;
            }
        }

        // pass 3: emit simplices + cell index
        lat.cell_offset.assign(static_cast<size_t>(ncells) + 1, 0);
        for (int64_t cell = 0; cell < ncells; ++cell) {
            int cnt = 0;
            for (int t = 0; t < tpl_per_cell; ++t)
                if (keep[static_cast<size_t>(cell * tpl_per_cell + t)]) ++cnt;
            lat.cell_offset[static_cast<size_t>(cell) + 1] =
                lat.cell_offset[static_cast<size_t>(cell)] + cnt;
        }
        int64_t nkept = lat.cell_offset[static_cast<size_t>(ncells)];
        lat.cell_simplices.resize(static_cast<size_t>(nkept));
        lat.cell_templates.resize(static_cast<size_t>(nkept));
        for (int64_t cell = 0, w = 0; cell < ncells; ++cell) {
            int i = static_cast<int>(cell % dims[0]);
            int j = static_cast<int>((cell / dims[0]) % dims[1]);
            int k = static_cast<int>(cell / (static_cast<int64_t>(dims[0]) * dims[1]));
            for (int t = 0; t < tpl_per_cell; ++t) {
                if (!keep[static_cast<size_t>(cell * tpl_per_cell + t)]) continue;
                TemplateDef td = (n == 2) ? kTri[((i + j) & 1) * 2 + t] : tet_template(t);
                int64_t sid = mesh.simplex_count();
                for (int q = 0; q <= n; ++q) {
                    int32_t local = lat.point_ids[static_cast<size_t>(pidx(
                        i + td.corners[q][0], j + td.corners[q][1], k + td.corners[q][2]))];
                    mesh.simplices.push_back(static_cast<int32_t>(lat.node_base + local));
                }
                mesh.region_of_simplex.push_back(static_cast<int32_t>(v));
                lat.cell_simplices[static_cast<size_t>(w)] =
                    static_cast<int32_t>(sid - lat.simplex_base);
                lat.cell_templates[static_cast<size_t>(w)] =
                    static_cast<int8_t>((n == 2) ? ((i + j) & 1) * 2 + t : t);
                ++w;
            }
        }
        mesh.lattices.push_back(std::move(lat));
    }

    // diameters, degeneracy, delta bookkeeping
    int64_t ns = mesh.simplex_count();
    mesh.h_per_simplex.resize(static_cast<size_t>(ns));
    parallel_chunks(ns, [&](int64_t b, int64_t e, int) {
        Vec corners[4];
        for (int64_t s = b; s < e; ++s) {
            const int32_t* ndp = mesh.simplex_nodes(s);
            for (int q = 0; q <= n; ++q) corners[q] = mesh.nodes[static_cast<size_t>(ndp[q])];
            double h = simplex_diameter(corners, n);
            mesh.h_per_simplex[static_cast<size_t>(s)] = h;
            double vol = simplex_volume(corners, n);
            if (vol <= 1e-12 * std::pow(h, n))
                throw GeometryError("build_mesh: degenerate simplex after snapping");
        }
    });
    mesh.h_max = 0.0;
    for (double h : mesh.h_per_simplex) mesh.h_max = std::max(mesh.h_max, h);
    mesh.delta_used = 0.0;
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        const Region& xr = x_regions[static_cast<size_t>(mesh.region_of_node[static_cast<size_t>(i)])];
        mesh.delta_used = std::max(mesh.delta_used, xr.signed_dist(mesh.nodes[static_cast<size_t>(i)]));
    }

    // coverage check: boundary + interior samples of every X region must locate
    for (size_t v = 0; v < x_regions.size(); ++v) {
        const Region& xr = x_regions[v];
        const int nb = 4096;
        for (int i = 0; i < nb; ++i) {
            Vec p;
            if (n == 2) {
                double a = 2.0 * M_PI * i / nb;
                p = xr.center + Vec{xr.radius * std::cos(a), xr.radius * std::sin(a)};
            } else {
                double z = 1.0 - 2.0 * (i + 0.5) / nb;
                double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                double a = 2.0 * M_PI * 0.6180339887498949 * i;
                p = xr.center + Vec{xr.radius * s * std::cos(a), xr.radius * s * std::sin(a),
                                    xr.radius * z};
            }
            try {
                (void)locate(mesh, p, static_cast<int>(v));
            } catch (const NotFoundError&) {
                throw CoverageError("build_mesh: X boundary sample escaped the mesh");
            }
        }
    }
    return mesh;
}

Mesh build_mesh(int n, const std::vector<Region>& x_regions, const std::vector<Region>& cover,
                double target_h, double delta) {
    if (x_regions.size() != cover.size())
        throw GeometryError("build_mesh: region/cover size mismatch");
    return build_mesh_impl(n, x_regions, cover, target_h, delta);
}

Mesh build_mesh(int n, const std::vector<Region>& x_regions, double target_h, double delta) {
    std::vector<Region> cover = x_regions;
    for (auto& r : cover) r.radius += delta;
    return build_mesh_impl(n, x_regions, cover, target_h, delta);
}

BarycentricLocation locate(const Mesh& mesh, const Vec& x, int hint_vertex) {
    const int n = mesh.n;
    double lam[4];
    if (mesh.has_lattice) {
        const SubLattice& lat = mesh.lattices[static_cast<size_t>(hint_vertex)];
        double g[3] = {0, 0, 0};
        int ci[3] = {0, 0, 0};
        for (int a = 0; a < n; ++a) {
            g[a] = (x[a] - lat.origin[a]) / lat.cell;
            ci[a] = std::clamp(static_cast<int>(std::floor(g[a])), 0, lat.dims[static_cast<size_t>(a)] - 1);
        }
        // candidate cells: own cell first, then the 3^n neighborhood
        auto try_cell = [&](int i, int j, int k, BarycentricLocation& out, double tol) {
            int64_t cell = (static_cast<int64_t>(k) * lat.dims[1] + j) * lat.dims[0] + i;
            int64_t b = lat.cell_offset[static_cast<size_t>(cell)];
            int64_t e = lat.cell_offset[static_cast<size_t>(cell) + 1];
            for (int64_t w = b; w < e; ++w) {
                int64_t sid = lat.simplex_base + lat.cell_simplices[static_cast<size_t>(w)];
                double m;
                if (lat.pure_lattice) {
                    double f[3] = {g[0] - i, g[1] - j, g[2] - k};
                    m = (n == 2) ? tri_bary(lat.cell_templates[static_cast<size_t>(w)], f[0], f[1], lam)
                                 : tet_bary(lat.cell_templates[static_cast<size_t>(w)], f, lam);
                } else {
                    m = general_bary(mesh, sid, x, lam);
                }
                if (m >= tol) {
                    out.simplex_index = sid;
                    clamp_and_fill(out, lam, n);
                    return true;
                }
            }
            return false;
        };
        BarycentricLocation loc;
        if (try_cell(ci[0], ci[1], ci[2], loc, -1e-12)) return loc;
        int kr = (n == 3) ? 1 : 0;
        for (int dk = -kr; dk <= kr; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0 && dk == 0) continue;
                    int i = ci[0] + di, j = ci[1] + dj, k = ci[2] + dk;
                    if (i < 0 || j < 0 || k < 0 || i >= lat.dims[0] || j >= lat.dims[1] ||
                        (n == 3 && k >= lat.dims[2]))
                        continue;
                    if (try_cell(i, j, k, loc, -1e-12)) return loc;
                }
        // relative tolerance net for face hits distorted by snapping
        if (!lat.pure_lattice) {
            for (int dk = -kr; dk <= kr; ++dk)
                for (int dj = -1; dj <= 1; ++dj)
                    for (int di = -1; di <= 1; ++di) {
                        int i = ci[0] + di, j = ci[1] + dj, k = ci[2] + dk;
                        if (i < 0 || j < 0 || k < 0 || i >= lat.dims[0] || j >= lat.dims[1] ||
                            (n == 3 && k >= lat.dims[2]))
                            continue;
                        if (try_cell(i, j, k, loc, -1e-10 / lat.cell)) return loc;
                    }
        }
        throw NotFoundError("locate: point outside mesh of its region");
    }
    // no lattice metadata (loaded mesh): exhaustive scan
    int64_t best = -1;
    double bestm = -1e300;
    double bestlam[4] = {0, 0, 0, 0};
    for (int64_t s = 0; s < mesh.simplex_count(); ++s) {
        if (mesh.region_of_simplex[static_cast<size_t>(s)] != hint_vertex) continue;
        double m = general_bary(mesh, s, x, lam);
        if (m > bestm) {
            bestm = m;
            best = s;
            for (int q = 0; q <= n; ++q) bestlam[q] = lam[q];
            if (m >= 0) break;
        }
    }
    if (best < 0 || bestm < -1e-10 / std::max(mesh.h_max, 1e-30))
        throw NotFoundError("locate: point outside mesh (exhaustive)");
    BarycentricLocation loc;
    loc.simplex_index = best;
    clamp_and_fill(loc, bestlam, n);
    return loc;
}

double interpolate(const Mesh& mesh, const NodalVector& v, const BarycentricLocation& loc) {
    const int32_t* nd = mesh.simplex_nodes(loc.simplex_index);
    double s = 0.0;
    for (int q = 0; q <= mesh.n; ++q)
        s += loc.lambdas[static_cast<size_t>(q)] * v[static_cast<size_t>(nd[q])];
    return s;
}

MeshStats mesh_stats(const Mesh& mesh) {
    MeshStats st;
    st.h_max = mesh.h_max;
    st.node_count = mesh.node_count();
    st.simplex_count = mesh.simplex_count();
    double q = 1e300;
    Vec corners[4];
    for (int64_t s = 0; s < mesh.simplex_count(); ++s) {
        const int32_t* nd = mesh.simplex_nodes(s);
        for (int i = 0; i <= mesh.n; ++i) corners[i] = mesh.nodes[static_cast<size_t>(nd[i])];
        double vol = simplex_volume(corners, mesh.n);
        double diam = simplex_diameter(corners, mesh.n);
        double inr;
        if (mesh.n == 2) {
            double per = norm(corners[1] - corners[0]) + norm(corners[2] - corners[1]) +
                         norm(corners[0] - corners[2]);
            inr = 2.0 * vol / per;
        } else {
            auto area = [](const Vec& a, const Vec& b, const Vec& c) {
                Vec u = b - a, w = c - a;
                Vec cr{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
                       u[0] * w[1] - u[1] * w[0]};
                return 0.5 * norm(cr);
            };
            double surf = area(corners[0], corners[1], corners[2]) +
                          area(corners[0], corners[1], corners[3]) +
                          area(corners[0], corners[2], corners[3]) +
                          area(corners[1], corners[2], corners[3]);
            inr = 3.0 * vol / surf;
        }
        q = std::min(q, inr / diam);
    }
    st.min_quality = (mesh.simplex_count() > 0) ? q : 0.0;
    return st;
}

void dump_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GeometryError("dump_mesh: cannot open " + path);
    char buf[128];
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        const Vec& p = mesh.nodes[static_cast<size_t>(i)];
        if (mesh.n == 2)
            std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p[0], p[1]);
        else
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p[0], p[1], p[2]);
        out << buf;
    }
    for (int64_t s = 0; s < mesh.simplex_count(); ++s) {
        const int32_t* nd = mesh.simplex_nodes(s);
        out << 's';
        for (int q = 0; q <= mesh.n; ++q) out << ' ' << nd[q];
        out << ' ' << mesh.region_of_simplex[static_cast<size_t>(s)] << '\n';
    }
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError("load_mesh: cannot open " + path);
    Mesh mesh;
    mesh.has_lattice = false;
    mesh.n = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        char tag;
        ss >> tag;
        if (tag == 'v') {
            std::vector<double> xs;
            double x;
            while (ss >> x) xs.push_back(x);
            if (mesh.n == 0) mesh.n = static_cast<int>(xs.size());
            Vec p;
            for (size_t a = 0; a < xs.size(); ++a) p[static_cast<int>(a)] = xs[a];
            mesh.nodes.push_back(p);
        } else if (tag == 's') {
            std::vector<int64_t> ids;
            int64_t q;
            while (ss >> q) ids.push_back(q);
            for (size_t a = 0; a + 1 < ids.size(); ++a)
                mesh.simplices.push_back(static_cast<int32_t>(ids[a]));
            mesh.region_of_simplex.push_back(static_cast<int32_t>(ids.back()));
        }
    }
    mesh.region_of_node.assign(mesh.nodes.size(), 0);
    for (int64_t s = 0; s < mesh.simplex_count(); ++s)
        for (int q = 0; q <= mesh.n; ++q)
            mesh.region_of_node[static_cast<size_t>(mesh.simplex_nodes(s)[q])] =
                mesh.region_of_simplex[static_cast<size_t>(s)];
    mesh.h_per_simplex.resize(static_cast<size_t>(mesh.simplex_count()));
    Vec corners[4];
    for (int64_t s = 0; s < mesh.simplex_count(); ++s) {
        const int32_t* nd = mesh.simplex_nodes(s);
        for (int q = 0; q <= mesh.n; ++q) corners[q] = mesh.nodes[static_cast<size_t>(nd[q])];
        mesh.h_per_simplex[static_cast<size_t>(s)] = simplex_diameter(corners, mesh.n);
        mesh.h_max = std::max(mesh.h_max, mesh.h_per_simplex[static_cast<size_t>(s)]);
    }
    return mesh;
}

} // namespace dimcert
