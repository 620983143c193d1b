#include "leanreg/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "leanreg/csv.hpp"
#include "leanreg/diagnostics.hpp"

namespace leanreg {

namespace {

using nlohmann::json;

std::string kind_name(DgpKind k) {
    return k == DgpKind::WellSpecified ? "WellSpecified" : "MisspecifiedCubic";
}

std::string theta_name(ThetaKind t) {
    return t == ThetaKind::FirstCoordinate ? "FirstCoordinate" : "UniformUnit";
}

DgpKind parse_kind(const std::string& s) {
    if (s == "WellSpecified") return DgpKind::WellSpecified;
    if (s == "MisspecifiedCubic") return DgpKind::MisspecifiedCubic;
    throw ConfigError("unknown dgp kind '" + s + "'");
}

ThetaKind parse_theta(const std::string& s) {
    if (s == "FirstCoordinate") return ThetaKind::FirstCoordinate;
    if (s == "UniformUnit") return ThetaKind::UniformUnit;
    throw ConfigError("unknown theta '" + s + "'");
}

CiMethod parse_method(const std::string& s) {
    if (s == "wald") return CiMethod::Wald;
    if (s == "hulc") return CiMethod::HulC;
    if (s == "tstat") return CiMethod::TStat;
    if (s == "wild") return CiMethod::WildBootstrap;
    if (s == "pairs") return CiMethod::PairsBootstrap;
    throw ConfigError("unknown method '" + s + "'");
}

uint64_t method_tag(CiMethod m) {
    switch (m) {
        case CiMethod::Wald: return 1;
        case CiMethod::HulC: return 2;
        case CiMethod::TStat: return 3;
        case CiMethod::WildBootstrap: return 4;
        case CiMethod::PairsBootstrap: return 5;
    }
    return 0;
}

// scalar-or-list JSON field
template <typename T, typename F>
std::vector<T> parse_list(const json& j, const std::string& key, F&& convert) {
    if (!j.contains(key)) throw ConfigError("missing dgp field '" + key + "'");
    const json& v = j.at(key);
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(convert(e));
    } else {
        out.push_back(convert(v));
    }
    if (out.empty()) throw ConfigError("dgp field '" + key + "' is empty");
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

int parse_threads(const json& j) {
    if (!j.contains("threads")) return 0;
    const json& t = j.at("threads");
    if (t.is_string()) {
        if (t.get<std::string>() == "auto") return 0;
        throw ConfigError("field 'threads' must be an integer or \"auto\"");
    }
    const int v = t.get<int>();
    if (v < 1) throw ConfigError("field 'threads' must be positive");
    return v;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (replications < 1) throw ConfigError("field 'replications' must be >= 1");
    if (methods.empty()) throw ConfigError("field 'methods' must be nonempty");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("field 'alpha' must lie in (0, 1)");
    if (n_list.empty() || d_list.empty()) throw ConfigError("dgp grid must be nonempty");
    for (double r : rho_list)
        if (r < 0.0 || r >= 1.0) throw ConfigError("field 'rho' must lie in [0, 1)");
    if (n_boot < 1) throw ConfigError("field 'n_boot' must be >= 1");
    if (tstat_batches < 2) throw ConfigError("field 'tstat_batches' must be >= 2");
}

ExperimentConfig load_experiment_config(const std::string& path) {
    const json j = load_json(path);
    ExperimentConfig cfg;
    try {
        if (!j.contains("dgp")) throw ConfigError("missing object 'dgp'");
        const json& dgp = j.at("dgp");
        cfg.kind = parse_kind(dgp.at("kind").get<std::string>());
        cfg.n_list = parse_list<std::size_t>(dgp, "n", [](const json& e) { return e.get<std::size_t>(); });
        cfg.d_list = parse_list<std::size_t>(dgp, "d", [](const json& e) { return e.get<std::size_t>(); });
        if (dgp.contains("rho"))
            cfg.rho_list = parse_list<double>(dgp, "rho", [](const json& e) { return e.get<double>(); });
        if (dgp.contains("theta"))
            cfg.theta_list = parse_list<ThetaKind>(
                dgp, "theta", [](const json& e) { return parse_theta(e.get<std::string>()); });

        if (!j.contains("methods")) throw ConfigError("missing list 'methods'");
        for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));

        cfg.alpha = j.value("alpha", 0.05);
        cfg.replications = j.at("replications").get<std::size_t>();
        cfg.n_boot = j.value("n_boot", 1000);
        cfg.master_seed = j.at("master_seed").get<uint64_t>();
        cfg.out_dir = j.value("out_dir", std::string("out"));
        cfg.threads = parse_threads(j);
        cfg.record_runtime = j.value("record_runtime", false);
        cfg.tstat_batches = j.value("tstat_batches", 6);
        if (j.contains("boot")) {
            const json& b = j.at("boot");
            if (b.contains("weight_law")) {
                const std::string law = b.at("weight_law").get<std::string>();
                if (law == "mammen")
                    cfg.boot.weight_law = WeightLaw::MammenTwoPoint;
                else if (law == "normal")
                    cfg.boot.weight_law = WeightLaw::StandardNormal;
                else
                    throw ConfigError("unknown weight_law '" + law + "'");
            }
            cfg.boot.debias_in_boot = b.value("debias", true);
            cfg.boot.center_boot_at_bc = b.value("center_at_bc", false);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    cfg.boot.n_boot = cfg.n_boot;
    cfg.validate();
    return cfg;
}

std::string dgp_spec_to_json(const DgpSpec& spec) {
    json j;
    j["kind"] = kind_name(spec.kind);
    j["n"] = spec.n;
    j["d"] = spec.d;
    j["rho"] = spec.rho;
    j["theta"] = theta_name(spec.theta);
    j["seed"] = spec.seed;
    return j.dump();
}

DgpSpec dgp_spec_from_json(const std::string& text) {
    DgpSpec spec;
    try {
        const json j = json::parse(text);
        spec.kind = parse_kind(j.at("kind").get<std::string>());
        spec.n = j.at("n").get<std::size_t>();
        spec.d = j.at("d").get<std::size_t>();
        spec.rho = j.value("rho", 0.0);
        if (j.contains("theta")) spec.theta = parse_theta(j.at("theta").get<std::string>());
        spec.seed = j.value("seed", uint64_t(0));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("dgp spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

uint64_t cell_hash(DgpKind kind, std::size_t n, std::size_t d, double rho, ThetaKind theta) {
    uint64_t h = hash_combine(0x6c65616e72656730ULL, uint64_t(kind));
    h = hash_combine(h, n);
    h = hash_combine(h, d);
    h = hash_combine(h, std::bit_cast<uint64_t>(rho));
    h = hash_combine(h, uint64_t(theta));
    return h;
}

uint64_t replication_stream_id(uint64_t cell, std::size_t replication, uint64_t tag) {
    return hash_combine(hash_combine(cell, replication), tag);
}

namespace {

ConfidenceInterval build_ci(CiMethod m, const Sample& sample, const Vector& c, double alpha,
                            const BootstrapSpec& boot, int tstat_batches, RngStream rng) {
    switch (m) {
        case CiMethod::Wald: return wald_ci(sample, c, alpha, rng);
        case CiMethod::HulC: return hulc_ci(sample, c, alpha, rng);
        case CiMethod::TStat: return tstat_ci(sample, c, alpha, tstat_batches, rng);
        case CiMethod::WildBootstrap: return wild_bootstrap_ci(sample, c, alpha, boot, rng);
        case CiMethod::PairsBootstrap: return pairs_bootstrap_ci(sample, c, alpha, boot, rng);
    }
    throw Error("unreachable");
}

std::optional<std::string> infeasible_reason(CiMethod m, std::size_t n, std::size_t d,
                                             double alpha, int tstat_batches) {
    if (m == CiMethod::HulC) {
        const int b = int(std::ceil(std::log2(2.0 / alpha)));
        if (n / std::size_t(b) <= d)
            return "batch_too_small: floor(n/" + std::to_string(b) + ") <= d";
    }
    if (m == CiMethod::TStat && n / std::size_t(tstat_batches) <= d)
        return "batch_too_small: floor(n/" + std::to_string(tstat_batches) + ") <= d";
    return std::nullopt;
}

}  // namespace

SimulationResult run_simulation(const ExperimentConfig& config) {
    config.validate();
    if (config.threads > 0) set_threads(config.threads);
    SimulationResult result;

    for (std::size_t n : config.n_list)
        for (std::size_t d : config.d_list)
            for (double rho : config.rho_list)
                for (ThetaKind theta : config.theta_list) {
                    if (n <= d) {
                        for (CiMethod m : config.methods)
                            result.skipped.push_back(
                                {config.kind, n, d, rho, theta, m, "n <= d"});
                        continue;
                    }
                    const DgpSpec spec{config.kind, n, d, rho, theta, config.master_seed};
                    const GroundTruth gt = ground_truth(spec);
                    const Vector c = canonical_contrast(spec);
                    const uint64_t chash = cell_hash(config.kind, n, d, rho, theta);

                    std::vector<CiMethod> feasible;
                    for (CiMethod m : config.methods) {
                        if (auto why = infeasible_reason(m, n, d, config.alpha, config.tstat_batches))
                            result.skipped.push_back({config.kind, n, d, rho, theta, m, *why});
                        else
                            feasible.push_back(m);
                    }
                    if (feasible.empty()) continue;

                    const std::size_t reps = config.replications;
                    const std::size_t nm = feasible.size();
                    std::vector<uint8_t> ok(nm * reps, 0), cover(nm * reps, 0);
                    std::vector<double> width(nm * reps, 0.0), runtime(nm * reps, 0.0);

#pragma omp parallel for schedule(dynamic)
                    for (std::int64_t r = 0; r < std::int64_t(reps); ++r) {
                        const RngStream sstream(config.master_seed,
                                                replication_stream_id(chash, std::size_t(r), 0));
                        const Sample sample = generate(spec, sstream);
                        for (std::size_t mi = 0; mi < nm; ++mi) {
                            const std::size_t slot = mi * reps + std::size_t(r);
                            const RngStream mstream(
                                config.master_seed,
                                replication_stream_id(chash, std::size_t(r),
                                                      method_tag(feasible[mi])));
                            try {
                                const auto t0 = std::chrono::steady_clock::now();
                                const ConfidenceInterval ci =
                                    build_ci(feasible[mi], sample, c, config.alpha, config.boot,
                                             config.tstat_batches, mstream);
                                const auto t1 = std::chrono::steady_clock::now();
                                cover[slot] = ci.covers(gt.target) ? 1 : 0;
                                width[slot] = ci.width();
                                runtime[slot] =
                                    std::chrono::duration<double, std::milli>(t1 - t0).count();
                                ok[slot] = 1;
                            } catch (const std::exception&) {
                                ok[slot] = 0;
                            }
                        }
                    }

                    for (std::size_t mi = 0; mi < nm; ++mi) {
                        std::size_t n_ok = 0, n_cover = 0;
                        Vector widths;
                        double runtime_sum = 0.0;
                        widths.reserve(reps);
                        for (std::size_t r = 0; r < reps; ++r) {
                            const std::size_t slot = mi * reps + r;
                            if (!ok[slot]) continue;
                            ++n_ok;
                            n_cover += cover[slot];
                            widths.push_back(width[slot]);
                            runtime_sum += runtime[slot];
                        }
                        if (n_ok == 0) {
                            result.skipped.push_back({config.kind, n, d, rho, theta, feasible[mi],
                                                      "all replications failed"});
                            continue;
                        }
                        if (n_ok < reps)
                            result.skipped.push_back(
                                {config.kind, n, d, rho, theta, feasible[mi],
                                 std::to_string(reps - n_ok) + " replications failed"});

                        CoverageRow row;
                        row.kind = config.kind;
                        row.n = n;
                        row.d = d;
                        row.rho = rho;
                        row.theta = theta;
                        row.method = feasible[mi];
                        row.alpha = config.alpha;
                        row.replications = n_ok;
                        row.target = gt.target;
                        row.coverage = double(n_cover) / double(n_ok);
                        row.coverage_se =
                            std::sqrt(row.coverage * (1.0 - row.coverage) / double(n_ok));
                        double mean_w = 0.0;
                        for (double w : widths) mean_w += w;
                        mean_w /= double(n_ok);
                        double ss = 0.0;
                        for (double w : widths) ss += (w - mean_w) * (w - mean_w);
                        row.mean_width = mean_w;
                        row.width_se =
                            n_ok > 1 ? std::sqrt(ss / double(n_ok - 1) / double(n_ok)) : 0.0;
                        row.mean_runtime_ms =
                            config.record_runtime ? runtime_sum / double(n_ok) : 0.0;
                        row.seed = config.master_seed;
                        row.widths = std::move(widths);
                        result.rows.push_back(std::move(row));
                    }
                }
    return result;
}

namespace {

std::string row_prefix(DgpKind kind, std::size_t n, std::size_t d, double rho, ThetaKind theta) {
    std::ostringstream os;
    os << kind_name(kind) << ',' << n << ',' << d << ',' << csv::fmt(rho, 6) << ','
       << theta_name(theta);
    return os.str();
}

}  // namespace

void write_simulation_outputs(const ExperimentConfig& config, const SimulationResult& result) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    fs::create_directories(config.out_dir + "/plotdata");

    {
        std::ofstream out(config.out_dir + "/coverage.csv");
        out << "dgp,n,d,rho,theta,method,alpha,replications,target,coverage,coverage_se,"
               "mean_width,width_se,mean_runtime_ms,seed\n";
        for (const CoverageRow& r : result.rows) {
            out << row_prefix(r.kind, r.n, r.d, r.rho, r.theta) << ',' << method_name(r.method)
                << ',' << csv::fmt(r.alpha, 6) << ',' << r.replications << ','
                << csv::fmt(r.target, 12) << ',' << csv::fmt_fixed(r.coverage, 6) << ','
                << csv::fmt_fixed(r.coverage_se, 6) << ',' << csv::fmt(r.mean_width, 12) << ','
                << csv::fmt(r.width_se, 12) << ',' << csv::fmt_fixed(r.mean_runtime_ms, 3) << ','
                << r.seed << '\n';
        }
    }

    {
        std::ofstream out(config.out_dir + "/widths.csv");
        out << "dgp,n,d,rho,theta,method,alpha,mean_width,width_se,min_width,q25_width,"
               "median_width,q75_width,max_width\n";
        for (const CoverageRow& r : result.rows) {
            Vector w = r.widths;
            std::sort(w.begin(), w.end());
            out << row_prefix(r.kind, r.n, r.d, r.rho, r.theta) << ',' << method_name(r.method)
                << ',' << csv::fmt(r.alpha, 6) << ',' << csv::fmt(r.mean_width, 12) << ','
                << csv::fmt(r.width_se, 12) << ',' << csv::fmt(w.front(), 12) << ','
                << csv::fmt(empirical_quantile(w, 0.25), 12) << ','
                << csv::fmt(empirical_quantile(w, 0.5), 12) << ','
                << csv::fmt(empirical_quantile(w, 0.75), 12) << ','
                << csv::fmt(w.back(), 12) << '\n';
        }
    }

    {
        // one plot file per (dgp, n): d, method, coverage, mean_width
        std::map<std::size_t, std::vector<const CoverageRow*>> by_n;
        for (const CoverageRow& r : result.rows) by_n[r.n].push_back(&r);
        for (const auto& [n, rows] : by_n) {
            std::ofstream out(config.out_dir + "/plotdata/" + kind_name(config.kind) + "_n" +
                              std::to_string(n) + ".csv");
            out << "d,method,coverage,mean_width\n";
            for (const CoverageRow* r : rows)
                out << r->d << ',' << method_name(r->method) << ','
                    << csv::fmt_fixed(r->coverage, 6) << ',' << csv::fmt(r->mean_width, 12)
                    << '\n';
        }
    }

    if (!result.skipped.empty()) {
        std::ofstream out(config.out_dir + "/skipped.csv");
        out << "dgp,n,d,rho,theta,method,reason\n";
        for (const SkippedCell& s : result.skipped)
            out << row_prefix(s.kind, s.n, s.d, s.rho, s.theta) << ',' << method_name(s.method)
                << ",\"" << s.reason << "\"\n";
    }
}

DiagnoseConfig load_diagnose_config(const std::string& path) {
    const json j = load_json(path);
    DiagnoseConfig cfg;
    try {
        cfg.kind = parse_kind(j.value("kind", std::string("WellSpecified")));
        if (!j.contains("grid")) throw ConfigError("missing list 'grid'");
        for (const auto& cell : j.at("grid")) {
            if (!cell.is_array() || cell.size() != 2)
                throw ConfigError("grid entries must be [n, d] pairs");
            cfg.grid.emplace_back(cell[0].get<std::size_t>(), cell[1].get<std::size_t>());
        }
        cfg.replications = j.value("replications", std::size_t(100));
        cfg.master_seed = j.at("master_seed").get<uint64_t>();
        cfg.out_dir = j.value("out_dir", std::string("out"));
        cfg.threads = parse_threads(j);
        if (j.contains("bias_scaling")) {
            const json& b = j.at("bias_scaling");
            cfg.bias_n = b.at("n").get<std::size_t>();
            for (const auto& e : b.at("d")) cfg.bias_d_list.push_back(e.get<std::size_t>());
            cfg.bias_replications = b.value("replications", std::size_t(200));
        }
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    if (cfg.grid.empty()) throw ConfigError("field 'grid' must be nonempty");
    if (cfg.replications < 2) throw ConfigError("field 'replications' must be >= 2");
    return cfg;
}

void run_diagnose(const DiagnoseConfig& config) {
    namespace fs = std::filesystem;
    if (config.threads > 0) set_threads(config.threads);
    fs::create_directories(config.out_dir);

    const RngStream root(config.master_seed, 0x64696167ULL);
    const auto summaries =
        concentration_sweep(config.grid, config.kind, config.replications, root.substream(1));
    {
        std::ofstream out(config.out_dir + "/concentration.csv");
        out << "n,d,replications,median_d_sigma,median_lambda_min,median_beta_err_sigma,"
               "median_max_fitted_dev,rate_ratio\n";
        for (const SweepSummary& s : summaries)
            out << s.n << ',' << s.d << ',' << s.reps << ',' << csv::fmt(s.median_d_sigma, 12)
                << ',' << csv::fmt(s.median_lambda_min, 12) << ','
                << csv::fmt(s.median_beta_err_sigma, 12) << ','
                << csv::fmt(s.median_max_fitted_dev, 12) << ',' << csv::fmt(s.rate_ratio, 12)
                << '\n';
    }

    if (config.bias_n > 0 && !config.bias_d_list.empty()) {
        const auto rows = bias_scaling_probe(config.bias_n, config.bias_d_list,
                                             config.bias_replications, root.substream(2));
        std::ofstream out(config.out_dir + "/bias_scaling.csv");
        out << "n,d,replications,raw_mean,raw_se,bc_mean,bc_se\n";
        for (const BiasScalingRow& r : rows)
            out << r.n << ',' << r.d << ',' << r.reps << ',' << csv::fmt(r.raw_mean, 12) << ','
                << csv::fmt(r.raw_se, 12) << ',' << csv::fmt(r.bc_mean, 12) << ','
                << csv::fmt(r.bc_se, 12) << '\n';
    }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw DataFormatError("row " + std::to_string(line_no) + ": non-numeric cell '" + s + "'");
    return v;
}

}  // namespace

Sample parse_data_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataFormatError("empty file: expected header y,x1,...,xd");
    const std::vector<std::string> header = split_fields(line);
    if (header.size() < 2 || header[0] != "y")
        throw DataFormatError("missing header: expected y,x1,...,xd");
    for (std::size_t k = 1; k < header.size(); ++k)
        if (header[k] != "x" + std::to_string(k))
            throw DataFormatError("bad header column " + std::to_string(k + 1) + ": expected x" +
                                  std::to_string(k) + ", got '" + header[k] + "'");
    const std::size_t d = header.size() - 1;

    std::vector<double> xs, ys;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != d + 1)
            throw DataFormatError("row " + std::to_string(line_no) + ": expected " +
                                  std::to_string(d + 1) + " fields, got " +
                                  std::to_string(fields.size()));
        ys.push_back(parse_cell(fields[0], line_no));
        for (std::size_t k = 1; k <= d; ++k) xs.push_back(parse_cell(fields[k], line_no));
    }
    const std::size_t n = ys.size();
    if (n == 0) throw DataFormatError("no data rows");
    if (n < d) throw SingularGram(0.0);  // fewer rows than columns: rank deficient

    Matrix x(n, d);
    x.data() = std::move(xs);
    return Sample(std::move(x), std::move(ys));
}

Sample parse_data_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataFormatError("cannot open data file '" + path + "'");
    return parse_data_csv(in);
}

int run_fit(const FitRequest& request, std::ostream& out, std::ostream& err) {
    try {
        const Sample sample = parse_data_csv_file(request.data_path);
        const std::size_t d = sample.d();

        Vector c(d, 0.0);
        if (request.contrast.rfind("coord:", 0) == 0) {
            std::size_t k = 0;
            const std::string num = request.contrast.substr(6);
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
            if (ec != std::errc() || ptr != num.data() + num.size() || k < 1 || k > d)
                throw DataFormatError("bad contrast '" + request.contrast + "' for d=" +
                                      std::to_string(d));
            c[k - 1] = 1.0;
        } else if (request.contrast.rfind("file:", 0) == 0) {
            std::ifstream cf(request.contrast.substr(5));
            if (!cf) throw DataFormatError("cannot open contrast file");
            c.clear();
            double v;
            while (cf >> v) c.push_back(v);
            if (c.size() != d)
                throw DataFormatError("contrast file has " + std::to_string(c.size()) +
                                      " entries, expected " + std::to_string(d));
        } else {
            throw DataFormatError("contrast must be coord:<k> or file:<path>");
        }

        const FitResult fit = ols_fit(sample);
        const DebiasResult db = moment_bias(sample, fit);
        const ContrastVariance v = sandwich(sample, fit, c);
        BootstrapSpec boot;
        boot.n_boot = request.n_boot;
        const ConfidenceInterval ci =
            build_ci(request.method, sample, c, request.alpha, boot, request.batches,
                     RngStream(request.seed, 0));

        if (request.header)
            out << "method,alpha,n,d,point_ols,point_bc,sigma_c,lower,upper,seed\n";
        out << method_name(request.method) << ',' << csv::fmt(request.alpha, 6) << ','
            << sample.n() << ',' << d << ',' << csv::fmt(dot(c, fit.beta_hat), 12) << ','
            << csv::fmt(dot(c, db.beta_bc), 12) << ',' << csv::fmt(std::sqrt(v.sigma2_hat), 12)
            << ',' << csv::fmt(ci.lower, 12) << ',' << csv::fmt(ci.upper, 12) << ','
            << request.seed << '\n';
        return 0;
    } catch (const SingularGram& e) {
        err << "leanreg fit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "leanreg fit: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace leanreg
