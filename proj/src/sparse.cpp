#include "dimcert/sparse.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "dimcert/parallel.hpp"

namespace dimcert {

double SparseMatrix::value(int64_t i, int64_t j) const {
    double v = 0.0;
    const auto& cp = *colptr;
    const auto& rw = *rows;
    int64_t b = cp[static_cast<size_t>(j)], e = cp[static_cast<size_t>(j) + 1];
    // rows are sorted within a column
    auto it = std::lower_bound(rw.begin() + b, rw.begin() + e, static_cast<int32_t>(i));
    if (it != rw.begin() + e && *it == i) v = (*vals)[static_cast<size_t>(it - rw.begin())] * scale;
    if (i == bump_row) v += bump_value;
    return v;
}

SparseMatrix SparseMatrix::from_triplets(
    int64_t n, const std::vector<std::tuple<int32_t, int32_t, double>>& t) {
    std::vector<std::tuple<int32_t, int32_t, double>> s(t);
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<0>(a) < std::get<0>(b);
    });
    SparseMatrix m;
    m.size = n;
    m.colptr = std::make_shared<std::vector<int64_t>>(static_cast<size_t>(n) + 1, 0);
    m.rows = std::make_shared<std::vector<int32_t>>();
    m.vals = std::make_shared<std::vector<double>>();
    for (size_t k = 0; k < s.size(); ++k) {
        auto [r, c, v] = s[k];
        if (!m.rows->empty() && k > 0 && std::get<1>(s[k - 1]) == c && std::get<0>(s[k - 1]) == r) {
            m.vals->back() += v; // merge duplicates
        } else {
            m.rows->push_back(r);
            m.vals->push_back(v);
        }
        (*m.colptr)[static_cast<size_t>(c) + 1] = static_cast<int64_t>(m.rows->size());
    }
    for (size_t j = 1; j <= static_cast<size_t>(n); ++j)
        (*m.colptr)[j] = std::max((*m.colptr)[j], (*m.colptr)[j - 1]);
    return m;
}

SparseMatrix SparseMatrix::from_dense_action(const std::vector<std::vector<double>>& dr) {
    // action_j = sum_k dr[j][k] w[k]  => stored column j lists (row=k, val=dr[j][k])
    std::vector<std::tuple<int32_t, int32_t, double>> t;
    for (size_t j = 0; j < dr.size(); ++j)
        for (size_t k = 0; k < dr[j].size(); ++k)
            if (dr[j][k] != 0.0)
                t.emplace_back(static_cast<int32_t>(k), static_cast<int32_t>(j), dr[j][k]);
    return from_triplets(static_cast<int64_t>(dr.size()), t);
}

void transfer_apply(const SparseMatrix& m, const std::vector<double>& w, std::vector<double>& y) {
    const auto& cp = *m.colptr;
    const auto& rw = *m.rows;
    const auto& vl = *m.vals;
    const double sc = m.scale;
    double bump = m.has_bump() ? m.bump_value * w[static_cast<size_t>(m.bump_row)] : 0.0;
    parallel_chunks(m.size, [&](int64_t b, int64_t e, int) {
        for (int64_t j = b; j < e; ++j) {
            double acc = 0.0;
            for (int64_t k = cp[static_cast<size_t>(j)]; k < cp[static_cast<size_t>(j) + 1]; ++k)
                acc += vl[static_cast<size_t>(k)] * w[static_cast<size_t>(rw[static_cast<size_t>(k)])];
            y[static_cast<size_t>(j)] = sc * acc + bump;
        }
    });
}

ColumnStats column_stats(const SparseMatrix& m) {
    ColumnStats st;
    st.nnz = m.nnz();
    st.fill = m.size ? static_cast<double>(st.nnz) / (static_cast<double>(m.size) * m.size) : 0.0;
    double mn = 1e300, mx = -1e300;
    const auto& cp = *m.colptr;
    const auto& vl = *m.vals;
    for (int64_t j = 0; j < m.size; ++j) {
        double s = 0.0;
        for (int64_t k = cp[static_cast<size_t>(j)]; k < cp[static_cast<size_t>(j) + 1]; ++k)
            s += vl[static_cast<size_t>(k)];
        s = s * m.scale + (m.has_bump() ? m.bump_value : 0.0);
        mn = std::min(mn, s);
        mx = std::max(mx, s);
    }
    st.min_col_sum = (m.size > 0) ? mn : 0.0;
    st.max_col_sum = (m.size > 0) ? mx : 0.0;
    return st;
}

void dump_matrix(const SparseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw RangeError("dump_matrix: cannot open " + path);
    char buf[96];
    out << m.size << '\n';
    for (int64_t j = 0; j < m.size; ++j) {
        for (int64_t k = (*m.colptr)[static_cast<size_t>(j)]; k < (*m.colptr)[static_cast<size_t>(j) + 1];
             ++k) {
            std::snprintf(buf, sizeof buf, "%d %lld %.17g\n", (*m.rows)[static_cast<size_t>(k)],
                          static_cast<long long>(j), (*m.vals)[static_cast<size_t>(k)] * m.scale);
            out << buf;
        }
        if (m.has_bump()) {
            std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(m.bump_row),
                          static_cast<long long>(j), m.bump_value);
            out << buf;
        }
    }
}

SparseMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RangeError("load_matrix: cannot open " + path);
    int64_t n;
    in >> n;
    std::vector<std::tuple<int32_t, int32_t, double>> t;
    int64_t r, c;
    double v;
    while (in >> r >> c >> v) t.emplace_back(static_cast<int32_t>(r), static_cast<int32_t>(c), v);
    return SparseMatrix::from_triplets(n, t);
}

} // namespace dimcert
