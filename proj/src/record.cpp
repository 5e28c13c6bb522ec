#include "dimcert/record.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "dimcert/constants.hpp"
#include "dimcert/parallel.hpp"

namespace dimcert {

using nlohmann::json;

namespace {

std::string b64_encode(const std::vector<double>& v) {
    static const char* tbl = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    const unsigned char* data = reinterpret_cast<const unsigned char*>(v.data());
    size_t len = v.size() * sizeof(double);
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (size_t i = 0; i < len; i += 3) {
        unsigned b0 = data[i];
        unsigned b1 = (i + 1 < len) ? data[i + 1] : 0;
        unsigned b2 = (i + 2 < len) ? data[i + 2] : 0;
        out.push_back(tbl[b0 >> 2]);
        out.push_back(tbl[((b0 & 3) << 4) | (b1 >> 4)]);
        out.push_back((i + 1 < len) ? tbl[((b1 & 15) << 2) | (b2 >> 6)] : '=');
        out.push_back((i + 2 < len) ? tbl[b2 & 63] : '=');
    }
    return out;
}

std::vector<double> b64_decode(const std::string& s) {
    auto val = [](char ch) -> int {
        if (ch >= 'A' && ch <= 'Z') return ch - 'A';
        if (ch >= 'a' && ch <= 'z') return ch - 'a' + 26;
        if (ch >= '0' && ch <= '9') return ch - '0' + 52;
        if (ch == '+') return 62;
        if (ch == '/') return 63;
        return -1;
    };
    std::vector<unsigned char> bytes;
    bytes.reserve(s.size() / 4 * 3);
    unsigned acc = 0;
    int bits = 0;
    for (char ch : s) {
        int v = val(ch);
        if (v < 0) continue;
        acc = (acc << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            bytes.push_back(static_cast<unsigned char>((acc >> bits) & 0xFF));
        }
    }
    std::vector<double> out(bytes.size() / sizeof(double));
    std::memcpy(out.data(), bytes.data(), out.size() * sizeof(double));
    return out;
}

json config_to_json(const RunConfig& c) {
    return json{{"system", c.system},
                {"mesh_h", c.mesh_h},
                {"delta", c.delta},
                {"truncation", c.truncation},
                {"width_goal", c.width_goal},
                {"tol_spectral", c.tol_spectral},
                {"seed", c.seed},
                {"jobs", c.jobs},
                {"validate_samples", c.validate_samples},
                {"t_init_lo", c.t_init_lo},
                {"t_init_hi", c.t_init_hi}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.system = j.at("system").get<std::string>();
    c.mesh_h = j.at("mesh_h").get<double>();
    c.delta = j.at("delta").get<double>();
    c.truncation = j.at("truncation").get<double>();
    c.width_goal = j.at("width_goal").get<double>();
    c.tol_spectral = j.at("tol_spectral").get<double>();
    c.seed = j.at("seed").get<uint64_t>();
    c.jobs = j.value("jobs", 0);
    c.validate_samples = j.value("validate_samples", 200);
    c.t_init_lo = j.value("t_init_lo", 0.0);
    c.t_init_hi = j.value("t_init_hi", 0.0);
    return c;
}

} // namespace

TailBound tail_bound_at(const SystemSpec& spec, const ErrorBudget& budget, int64_t anchor,
                        double t) {
    const TailDescriptor& td = *spec.alphabet.tail;
    TailBound tb;
    tb.kind = td;
    tb.anchor_node = anchor;
    tb.truncation_parameter = spec.alphabet.truncation;
    double c0;
    if (td.kind == TailDescriptor::Kind::cf_integral) {
        c0 = tail_constant_cf(spec.n, t, spec.alphabet.truncation, budget.C1);
    } else {
        c0 = tail_constant_apollonian(t, static_cast<int>(spec.alphabet.truncation), td.k_count);
    }
    tb.C0 = c0 * (1.0 + budget.err_max);
    return tb;
}

PipelineParts build_pipeline(const RunConfig& config) {
    const CatalogEntry* entry = find_catalog(config.system);
    if (!entry) throw ConfigError("unknown system '" + config.system + "'");
    if (config.mesh_h <= 0) throw ConfigError("mesh_h must be positive");
    if (config.jobs > 0) set_worker_count(config.jobs);

    PipelineParts parts;
    double trunc = config.truncation > 0 ? config.truncation : entry->default_truncation;
    parts.spec = entry->build(trunc);

    double delta = config.delta > 0 ? config.delta
                                    : std::min(0.5 * entry->eta, 2.0 * config.mesh_h);
    parts.delta = delta;
    std::vector<Region> cover = mesh_balls_for(parts.spec, delta);
    parts.spec.mesh_balls = cover;
    parts.mesh = build_mesh(parts.spec.n, parts.spec.x_regions, cover, config.mesh_h, delta);

    double mid = 0.5; // resolved below
    mid = entry->table_interval.first;
    double rad = entry->table_interval.second;
    parts.t_cap = std::max(entry->t_upper, mid + std::max(3.0 * rad, 0.02 * mid));

    double eta_eff = entry->eta - parts.mesh.delta_used;
    if (eta_eff <= 0) throw GeometryError("run: mesh excursion ate the whole extension margin");
    ErrorBudget b;
    b.eta = eta_eff;
    b.t_upper_used = parts.t_cap;
    b.C_BH = bramble_hilbert_constant(parts.spec.n);
    char buf[160];
    if (parts.spec.moebius_only) {
        b.C1 = derivative_constant_mobius(parts.spec.n, parts.t_cap, eta_eff, 1);
        b.C2 = derivative_constant_mobius(parts.spec.n, parts.t_cap, eta_eff, 2);
        std::snprintf(buf, sizeof buf, "mobius n=%d t_upper=%.6g eta=%.12g", parts.spec.n,
                      parts.t_cap, eta_eff);
    } else {
        b.C1 = derivative_constant_analytic2d(parts.t_cap, eta_eff, 1);
        b.C2 = derivative_constant_analytic2d(parts.t_cap, eta_eff, 2);
        std::snprintf(buf, sizeof buf, "analytic2d t_upper=%.6g eta=%.12g", parts.t_cap, eta_eff);
    }
    parts.audit.push_back({"C1", b.C1, buf});
    parts.audit.push_back({"C2", b.C2, buf});
    parts.audit.push_back({"C_BH", b.C_BH, "n-dependent"});
    b.err_max = interpolation_error_factor(parts.mesh.h_max, b.C1, b.C2, b.C_BH);
    std::snprintf(buf, sizeof buf, "h_max=%.12g C1=%.6g C2=%.6g C_BH=%.6g", parts.mesh.h_max, b.C1,
                  b.C2, b.C_BH);
    parts.audit.push_back({"err_max", b.err_max, buf});
    parts.budget = b;

    if (parts.spec.alphabet.tail)
        parts.anchor_node = anchor_node_for_vertex(parts.mesh, parts.spec.x_regions[0], 0);
    return parts;
}

ResultRecord run(const RunConfig& config) {
    PipelineParts parts = build_pipeline(config);
    const CatalogEntry* entry = find_catalog(config.system);

    ResultRecord rec;
    rec.config = config;
    rec.system_name = parts.spec.name;
    rec.n = parts.spec.n;
    rec.map_count = static_cast<int64_t>(parts.spec.alphabet.maps.size());
    rec.eta = entry->eta;
    rec.delta = parts.delta;
    rec.h_max = parts.mesh.h_max;
    rec.nodes = parts.mesh.node_count();
    rec.simplex_count = parts.mesh.simplex_count();
    rec.mesh_fp = mesh_fingerprint(parts.mesh);
    rec.delta_used = parts.mesh.delta_used;
    rec.budget = parts.budget;
    rec.audit = parts.audit;
    rec.truncation = parts.spec.alphabet.truncation;
    rec.has_tail = parts.spec.alphabet.tail.has_value();
    rec.anchor_node = parts.anchor_node;

    ValidationReport vr = validate_system(parts.spec, config.validate_samples, config.seed);
    rec.validation = vr.checks;
    rec.validation_pass = vr.all_pass();

    SolverSetup setup;
    setup.system = &parts.spec;
    setup.mesh = &parts.mesh;
    setup.budget = parts.budget;
    setup.tol_spectral = config.tol_spectral;
    auto cache = build_assembly_cache(parts.spec, parts.mesh);
    if (cache) setup.cache = &*cache;
    if (parts.spec.alphabet.tail) {
        const SystemSpec* sp = &parts.spec;
        const ErrorBudget* bp = &parts.budget;
        int64_t anchor = parts.anchor_node;
        setup.tail_for = [sp, bp, anchor](double t) -> std::optional<TailBound> {
            return tail_bound_at(*sp, *bp, anchor, t);
        };
    }

    double mid = entry->table_interval.first;
    double lo0 = config.t_init_lo > 0 ? config.t_init_lo : 0.9 * mid;
    double hi0 = config.t_init_hi > 0 ? config.t_init_hi : std::min(1.1 * mid, parts.t_cap);
    if (parts.spec.alphabet.tail)
        lo0 = std::max(lo0, parts.spec.alphabet.tail->admissible_above() * (1.0 + 1e-6));

    double width_goal = config.width_goal;
    if (width_goal <= 0) {
        // default: 4x the err floor, slope estimated from the two hint points
        EvalPoint e0 = evaluate_at(setup, lo0);
        EvalPoint e1 = evaluate_at(setup, hi0);
        double slope = std::abs(std::log(std::max(e1.lo_A, 1e-300)) -
                                std::log(std::max(e0.lo_A, 1e-300))) /
                       std::max(hi0 - lo0, 1e-12);
        double floor_w = (std::log1p(parts.budget.err_max) - std::log1p(-parts.budget.err_max)) /
                         std::max(slope, 1e-12);
        width_goal = 4.0 * floor_w;
    }

    rec.interval = bracket_dimension(setup, width_goal, {lo0, hi0});
    if (rec.has_tail) {
        rec.tail_C0_lo = tail_bound_at(parts.spec, parts.budget, parts.anchor_node,
                                       rec.interval.t_lo)
                             .C0;
        rec.tail_C0_hi = tail_bound_at(parts.spec, parts.budget, parts.anchor_node,
                                       rec.interval.t_hi)
                             .C0;
    }
    if (!config.out_path.empty()) write_record(rec, config.out_path);
    return rec;
}

void write_record(const ResultRecord& rec, const std::string& path) {
    json j;
    j["version"] = rec.version;
    j["config"] = config_to_json(rec.config);
    j["system"] = {{"name", rec.system_name},
                   {"n", rec.n},
                   {"map_count", rec.map_count},
                   {"eta", rec.eta},
                   {"truncation", rec.truncation},
                   {"has_tail", rec.has_tail}};
    j["mesh"] = {{"h_max", rec.h_max},
                 {"nodes", rec.nodes},
                 {"simplices", rec.simplex_count},
                 {"fingerprint", rec.mesh_fp},
                 {"delta", rec.delta},
                 {"delta_used", rec.delta_used}};
    j["budget"] = {{"C_BH", rec.budget.C_BH},   {"C1", rec.budget.C1},
                   {"C2", rec.budget.C2},       {"eta", rec.budget.eta},
                   {"err_max", rec.budget.err_max}, {"t_upper_used", rec.budget.t_upper_used}};
    j["audit"] = json::array();
    for (const auto& a : rec.audit)
        j["audit"].push_back({{"name", a.name}, {"value", a.value}, {"inputs", a.inputs}});
    j["tail"] = {{"C0_lo", rec.tail_C0_lo},
                 {"C0_hi", rec.tail_C0_hi},
                 {"anchor_node", rec.anchor_node}};
    j["validation"] = json::array();
    for (const auto& c : rec.validation)
        j["validation"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
    j["validation_pass"] = rec.validation_pass;
    const CertifiedInterval& iv = rec.interval;
    json trace = json::array();
    for (const auto& e : iv.trace)
        trace.push_back({{"t", e.t},
                         {"lo_A", e.lo_A},
                         {"hi_A", e.hi_A},
                         {"lo_B", e.lo_B},
                         {"hi_B", e.hi_B},
                         {"cond_lower", e.cond_lower},
                         {"cond_upper", e.cond_upper},
                         {"power_iters", e.power_iters}});
    j["interval"] = {{"t_lo", iv.t_lo},
                     {"t_hi", iv.t_hi},
                     {"width", iv.t_hi - iv.t_lo},
                     {"evidence_lo", {{"lo", iv.evidence_lo.lo}, {"hi", iv.evidence_lo.hi},
                                      {"iterations", iv.evidence_lo.iterations}}},
                     {"evidence_hi", {{"lo", iv.evidence_hi.lo}, {"hi", iv.evidence_hi.hi},
                                      {"iterations", iv.evidence_hi.iterations}}},
                     {"h_max", iv.h_max},
                     {"err", iv.err},
                     {"mesh_limited", iv.mesh_limited},
                     {"wall_time_s", iv.wall_time_s},
                     {"trace", trace}};
    j["witness_lo_b64"] = b64_encode(iv.evidence_lo.witness);
    j["witness_hi_b64"] = b64_encode(iv.evidence_hi.witness);

    std::ofstream out(path);
    if (!out) throw ConfigError("write_record: cannot open " + path);
    out << j.dump(1, '\t', false, json::error_handler_t::replace) << '\n';
}

ResultRecord read_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_record: cannot open " + path);
    json j;
    in >> j;
    ResultRecord rec;
    rec.version = j.at("version").get<std::string>();
    rec.config = config_from_json(j.at("config"));
    rec.system_name = j.at("system").at("name").get<std::string>();
    rec.n = j.at("system").at("n").get<int>();
    rec.map_count = j.at("system").at("map_count").get<int64_t>();
    rec.eta = j.at("system").at("eta").get<double>();
    rec.truncation = j.at("system").at("truncation").get<double>();
    rec.has_tail = j.at("system").at("has_tail").get<bool>();
    rec.h_max = j.at("mesh").at("h_max").get<double>();
    rec.nodes = j.at("mesh").at("nodes").get<int64_t>();
    rec.simplex_count = j.at("mesh").at("simplices").get<int64_t>();
    rec.mesh_fp = j.at("mesh").at("fingerprint").get<uint64_t>();
    rec.delta = j.at("mesh").at("delta").get<double>();
    rec.delta_used = j.at("mesh").at("delta_used").get<double>();
    rec.budget.C_BH = j.at("budget").at("C_BH").get<double>();
    rec.budget.C1 = j.at("budget").at("C1").get<double>();
    rec.budget.C2 = j.at("budget").at("C2").get<double>();
    rec.budget.eta = j.at("budget").at("eta").get<double>();
    rec.budget.err_max = j.at("budget").at("err_max").get<double>();
    rec.budget.t_upper_used = j.at("budget").at("t_upper_used").get<double>();
    rec.tail_C0_lo = j.at("tail").at("C0_lo").get<double>();
    rec.tail_C0_hi = j.at("tail").at("C0_hi").get<double>();
    rec.anchor_node = j.at("tail").at("anchor_node").get<int64_t>();
    rec.validation_pass = j.at("validation_pass").get<bool>();
    const json& iv = j.at("interval");
    rec.interval.t_lo = iv.at("t_lo").get<double>();
    rec.interval.t_hi = iv.at("t_hi").get<double>();
    rec.interval.evidence_lo.lo = iv.at("evidence_lo").at("lo").get<double>();
    rec.interval.evidence_lo.hi = iv.at("evidence_lo").at("hi").get<double>();
    rec.interval.evidence_hi.lo = iv.at("evidence_hi").at("lo").get<double>();
    rec.interval.evidence_hi.hi = iv.at("evidence_hi").at("hi").get<double>();
    rec.interval.h_max = iv.at("h_max").get<double>();
    rec.interval.err = iv.at("err").get<double>();
    rec.interval.mesh_limited = iv.at("mesh_limited").get<bool>();
    rec.interval.evidence_lo.witness = b64_decode(j.at("witness_lo_b64").get<std::string>());
    rec.interval.evidence_hi.witness = b64_decode(j.at("witness_hi_b64").get<std::string>());
    return rec;
}

bool verify_record(const std::string& path) {
    ResultRecord rec = read_record(path);
    RunConfig cfg = rec.config;
    PipelineParts parts = build_pipeline(cfg);
    if (mesh_fingerprint(parts.mesh) != rec.mesh_fp)
        throw VerificationFailure("verify_record: mesh fingerprint mismatch");
    if (parts.mesh.node_count() != rec.nodes)
        throw VerificationFailure("verify_record: node count mismatch");
    if (std::abs(parts.budget.err_max - rec.budget.err_max) >
        1e-12 * std::max(1.0, rec.budget.err_max))
        throw VerificationFailure("verify_record: error budget mismatch");
    if (static_cast<int64_t>(rec.interval.evidence_lo.witness.size()) != rec.nodes ||
        static_cast<int64_t>(rec.interval.evidence_hi.witness.size()) != rec.nodes)
        throw VerificationFailure("verify_record: witness length mismatch");

    // lower endpoint: one assembly + one product against the stored witness
    TransferMatrices tm_lo = assemble(parts.spec, parts.mesh, rec.interval.t_lo, parts.budget);
    CertifiedRadius lo = certify_bounds(tm_lo.A, rec.interval.evidence_lo.witness);
    if (!(lo.lo > 1.0)) return false;

    TransferMatrices tm_hi = assemble(parts.spec, parts.mesh, rec.interval.t_hi, parts.budget);
    if (rec.has_tail)
        tm_hi = apply_tail_correction(
            std::move(tm_hi),
            tail_bound_at(parts.spec, parts.budget, rec.anchor_node, rec.interval.t_hi));
    CertifiedRadius hi = certify_bounds(tm_hi.B, rec.interval.evidence_hi.witness);
    if (!(hi.hi < 1.0)) return false;
    return true;
}

} // namespace dimcert
