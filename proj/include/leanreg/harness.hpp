#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "leanreg/dgp.hpp"
#include "leanreg/inference.hpp"

namespace leanreg {

struct ExperimentConfig {
    DgpKind kind = DgpKind::WellSpecified;
    std::vector<std::size_t> n_list;
    std::vector<std::size_t> d_list;
    std::vector<double> rho_list{0.0};
    std::vector<ThetaKind> theta_list{ThetaKind::FirstCoordinate};
    std::vector<CiMethod> methods;
    double alpha = 0.05;
    std::size_t replications = 1;
    int n_boot = 1000;
    uint64_t master_seed = 0;
    std::string out_dir = "out";
    int threads = 0;  // 0 = auto
    // Timing column is zeroed unless requested: measured times would break
    // the byte-identical output contract across runs and thread counts.
    bool record_runtime = false;
    int tstat_batches = 6;
    BootstrapSpec boot;

    void validate() const;
};

ExperimentConfig load_experiment_config(const std::string& path);

/// JSON round trip for a single process specification (fields kind, n, d,
/// rho, theta, seed).
std::string dgp_spec_to_json(const DgpSpec& spec);
DgpSpec dgp_spec_from_json(const std::string& text);

struct CoverageRow {
    DgpKind kind;
    std::size_t n, d;
    double rho;
    ThetaKind theta;
    CiMethod method;
    double alpha;
    std::size_t replications;  // successful replications
    double target;
    double coverage;
    double coverage_se;
    double mean_width;
    double width_se;
    double mean_runtime_ms;
    uint64_t seed;
    std::vector<double> widths;  // per-replication widths for the width report
};

struct SkippedCell {
    DgpKind kind;
    std::size_t n, d;
    double rho;
    ThetaKind theta;
    CiMethod method;
    std::string reason;
};

struct SimulationResult {
    std::vector<CoverageRow> rows;
    std::vector<SkippedCell> skipped;
};

/// Stream id of the sample drawn for replication r of a grid cell; method
/// pivots use tag = 1 + the method's fixed id so that adding methods to a
/// config never perturbs existing draws.
uint64_t cell_hash(DgpKind kind, std::size_t n, std::size_t d, double rho, ThetaKind theta);
uint64_t replication_stream_id(uint64_t cell, std::size_t replication, uint64_t tag);

SimulationResult run_simulation(const ExperimentConfig& config);
void write_simulation_outputs(const ExperimentConfig& config, const SimulationResult& result);

struct DiagnoseConfig {
    DgpKind kind = DgpKind::WellSpecified;
    std::vector<std::pair<std::size_t, std::size_t>> grid;
    std::size_t replications = 100;
    std::size_t bias_n = 0;  // 0 disables the bias-scaling table
    std::vector<std::size_t> bias_d_list;
    std::size_t bias_replications = 0;
    uint64_t master_seed = 0;
    std::string out_dir = "out";
    int threads = 0;
};

DiagnoseConfig load_diagnose_config(const std::string& path);
void run_diagnose(const DiagnoseConfig& config);

/// CSV reader for `y,x1,...,xd` data files. Malformed input raises
/// DataFormatError (with the offending row); a file with fewer rows than
/// columns raises SingularGram.
Sample parse_data_csv(std::istream& in);
Sample parse_data_csv_file(const std::string& path);

struct FitRequest {
    std::string data_path;
    std::string contrast;  // "coord:k" or "file:<path>"
    CiMethod method = CiMethod::Wald;
    double alpha = 0.05;
    uint64_t seed = 0;
    int n_boot = 1000;
    int batches = 6;
    bool header = false;
};

/// Runs a single fit and prints one CSV row to out. Returns the process exit
/// code (0 ok, 2 parse error, 3 singular gram).
int run_fit(const FitRequest& request, std::ostream& out, std::ostream& err);

/// Full command-line entry point (simulate / fit / diagnose).
int run_cli(int argc, const char* const* argv);

}  // namespace leanreg
