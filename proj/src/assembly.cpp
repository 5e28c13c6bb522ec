#include "dimcert/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "dimcert/parallel.hpp"

namespace dimcert {

namespace {

// Per-thread column accumulator: dense values with an epoch-stamped touched
// list, so clearing between columns is O(touched).
struct ColumnAccum {
    std::vector<double> val;
    std::vector<int64_t> stamp;
    std::vector<int32_t> touched;
    int64_t epoch = 0;

    void init(int64_t n) {
        val.assign(static_cast<size_t>(n), 0.0);
        stamp.assign(static_cast<size_t>(n), -1);
        touched.clear();
        touched.reserve(4096);
    }
    void begin() {
        ++epoch;
        touched.clear();
    }
    void add(int32_t row, double v) {
        if (stamp[static_cast<size_t>(row)] != epoch) {
            stamp[static_cast<size_t>(row)] = epoch;
            val[static_cast<size_t>(row)] = v;
            touched.push_back(row);
        } else {
            val[static_cast<size_t>(row)] += v;
        }
    }
};

struct ColumnBuffer {
    std::vector<int32_t> rows;
    std::vector<double> vals;
    std::vector<int64_t> counts; // per column in the chunk
};

} // namespace

uint64_t mesh_fingerprint(const Mesh& mesh) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(&mesh.n, sizeof mesh.n);
    if (!mesh.nodes.empty()) mix(mesh.nodes.data(), mesh.nodes.size() * sizeof(Vec));
    if (!mesh.simplices.empty())
        mix(mesh.simplices.data(), mesh.simplices.size() * sizeof(int32_t));
    return h;
}

int64_t anchor_node_for_vertex(const Mesh& mesh, const Region& region, int vertex) {
    int64_t best = -1;
    double bd = 1e300;
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        if (mesh.region_of_node[static_cast<size_t>(i)] != vertex) continue;
        double d = norm(mesh.nodes[static_cast<size_t>(i)] - region.center);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

std::optional<AssemblyCache> build_assembly_cache(const SystemSpec& spec, const Mesh& mesh,
                                                  const AssemblyOptions& opt) {
    const int64_t ncols = mesh.node_count();
    const auto& maps = spec.alphabet.maps;
    // upper bound: every map applies to every node of its source vertex
    std::vector<int64_t> maps_per_vertex(spec.x_regions.size(), 0);
    for (const auto& f : maps) ++maps_per_vertex[static_cast<size_t>(f.source_vertex)];
    int64_t total = 0;
    for (int64_t j = 0; j < ncols; ++j)
        total += maps_per_vertex[static_cast<size_t>(mesh.region_of_node[static_cast<size_t>(j)])];
    if (total > opt.cache_entry_cap) return std::nullopt;

    AssemblyCache cache;
    cache.n = mesh.n;
    cache.ncols = ncols;
    cache.col_ptr.assign(static_cast<size_t>(ncols) + 1, 0);
    for (int64_t j = 0; j < ncols; ++j)
        cache.col_ptr[static_cast<size_t>(j) + 1] =
            cache.col_ptr[static_cast<size_t>(j)] +
            maps_per_vertex[static_cast<size_t>(mesh.region_of_node[static_cast<size_t>(j)])];
    const int np = mesh.n + 1;
    cache.logd.resize(static_cast<size_t>(total));
    cache.entry_rows.resize(static_cast<size_t>(total) * np);
    cache.entry_lambda.resize(static_cast<size_t>(total) * np);

    parallel_chunks(ncols, [&](int64_t b, int64_t e, int) {
        for (int64_t j = b; j < e; ++j) {
            int v = mesh.region_of_node[static_cast<size_t>(j)];
            const Vec& x = mesh.nodes[static_cast<size_t>(j)];
            int64_t w = cache.col_ptr[static_cast<size_t>(j)];
            for (const auto& f : maps) {
                if (f.source_vertex != v) continue;
                Vec y;
                double dn;
                apply_and_norm(f, x, y, dn);
                BarycentricLocation loc = locate(mesh, y, f.target_vertex);
                const int32_t* nd = mesh.simplex_nodes(loc.simplex_index);
                cache.logd[static_cast<size_t>(w)] = std::log(dn);
                for (int q = 0; q < np; ++q) {
                    cache.entry_rows[static_cast<size_t>(w) * np + q] = nd[q];
                    cache.entry_lambda[static_cast<size_t>(w) * np + q] =
                        loc.lambdas[static_cast<size_t>(q)];
                }
                ++w;
            }
        }
    });
    return cache;
}

TransferMatrices assemble(const SystemSpec& spec, const Mesh& mesh, double t,
                          const ErrorBudget& budget, const AssemblyCache* cache,
                          const AssemblyOptions& opt) {
    if (budget.err_max >= 1.0)
        throw ErrTooLarge("assemble: err_max >= 1, mesh too coarse to certify");
    if (spec.alphabet.tail && t <= spec.alphabet.tail->admissible_above())
        throw RangeError("assemble: t outside the admissible range of the tail");

    const int64_t ncols = mesh.node_count();
    const int np = mesh.n + 1;
    const auto& maps = spec.alphabet.maps;

    int jobs = worker_count();
    int64_t chunk = (ncols + jobs - 1) / jobs;
    std::vector<ColumnBuffer> bufs(static_cast<size_t>(jobs));

    auto run_chunk = [&](int64_t b, int64_t e, int worker) {
        ColumnBuffer& buf = bufs[static_cast<size_t>(worker)];
        buf.counts.reserve(static_cast<size_t>(e - b));
        ColumnAccum acc;
        acc.init(ncols);
        for (int64_t j = b; j < e; ++j) {
            acc.begin();
            if (cache) {
                for (int64_t w = cache->col_ptr[static_cast<size_t>(j)];
                     w < cache->col_ptr[static_cast<size_t>(j) + 1]; ++w) {
                    double dnt = std::exp(t * cache->logd[static_cast<size_t>(w)]);
                    const int32_t* rw = &cache->entry_rows[static_cast<size_t>(w) * np];
                    const double* lm = &cache->entry_lambda[static_cast<size_t>(w) * np];
                    for (int q = 0; q < np; ++q)
                        if (lm[q] > 0.0) acc.add(rw[q], dnt * lm[q]);
                }
            } else {
                int v = mesh.region_of_node[static_cast<size_t>(j)];
                const Vec& x = mesh.nodes[static_cast<size_t>(j)];
                for (const auto& f : maps) {
                    if (f.source_vertex != v) continue;
                    Vec y;
                    double dn;
                    apply_and_norm(f, x, y, dn);
                    BarycentricLocation loc = locate(mesh, y, f.target_vertex);
                    const int32_t* nd = mesh.simplex_nodes(loc.simplex_index);
                    // same expression as the cached path, so both agree bitwise
                    double dnt = std::exp(t * std::log(dn));
                    for (int q = 0; q < np; ++q)
                        if (loc.lambdas[static_cast<size_t>(q)] > 0.0)
                            acc.add(nd[q], dnt * loc.lambdas[static_cast<size_t>(q)]);
                }
            }
            std::sort(acc.touched.begin(), acc.touched.end());
            buf.counts.push_back(static_cast<int64_t>(acc.touched.size()));
            for (int32_t r : acc.touched) {
                buf.rows.push_back(r);
                buf.vals.push_back(acc.val[static_cast<size_t>(r)]);
            }
        }
    };
    // fixed chunking: output independent of scheduling
    parallel_chunks(ncols, [&](int64_t b, int64_t e, int worker) {
        (void)chunk;
        run_chunk(b, e, worker);
    });

    auto colptr = std::make_shared<std::vector<int64_t>>(static_cast<size_t>(ncols) + 1, 0);
    int64_t total = 0;
    {
        int64_t j = 0;
        for (const auto& buf : bufs)
            for (int64_t cnt : buf.counts) {
                total += cnt;
                (*colptr)[static_cast<size_t>(++j)] = total;
            }
    }
    auto rows = std::make_shared<std::vector<int32_t>>();
    auto vals = std::make_shared<std::vector<double>>();
    rows->reserve(static_cast<size_t>(total));
    vals->reserve(static_cast<size_t>(total));
    for (auto& buf : bufs) {
        rows->insert(rows->end(), buf.rows.begin(), buf.rows.end());
        vals->insert(vals->end(), buf.vals.begin(), buf.vals.end());
        buf.rows.clear();
        buf.rows.shrink_to_fit();
        buf.vals.clear();
        buf.vals.shrink_to_fit();
    }

    TransferMatrices tm;
    tm.t = t;
    tm.err = budget.err_max;
    tm.system_name = spec.name;
    tm.mesh_fingerprint = mesh_fingerprint(mesh);
    tm.A.size = tm.B.size = ncols;
    tm.A.colptr = tm.B.colptr = colptr;
    tm.A.rows = tm.B.rows = rows;
    tm.A.vals = tm.B.vals = vals;
    tm.A.scale = (1.0 - budget.err_max) * (1.0 - opt.fp_slack);
    tm.B.scale = (1.0 + budget.err_max) * (1.0 + opt.fp_slack);
    return tm;
}

TransferMatrices apply_tail_correction(TransferMatrices tm, const TailBound& tail) {
    tm.B.bump_row = tail.anchor_node;
    tm.B.bump_value += tail.C0;
    tm.tail = tail;
    return tm;
}

} // namespace dimcert
