#ifndef NETCF_BENCH_HPP
#define NETCF_BENCH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dataset_io.hpp"
#include "measures.hpp"
#include "metrics.hpp"
#include "predict.hpp"
#include "split.hpp"

namespace netcf {

struct GroupRange {
    std::uint32_t lo = 0;
    std::optional<std::uint32_t> hi;
};

/// Full experiment description. Defaults follow the benchmark protocol:
/// 150 sampled entities, 15 deletions each, K^I = 10, relevance threshold 4,
/// BCRI t = 5, Katz beta = 0.85/lambda_1.
struct ExperimentConfig {
    std::string dataset;
    FileFormat format = FileFormat::auto_detect;
    RatingDomain domain{1, 5};
    int setup = 1;
    Axis axis = Axis::user;
    std::vector<GroupRange> groups = {{20, 25}, {100, 149}, {150, std::nullopt}, {20, std::nullopt}};
    std::uint32_t sample_size = 150;
    std::uint32_t deletions = 15;
    double sparsify_fraction = 0.75; // setup 2 only
    std::vector<std::string> measures = {"pcc", "pip", "nhsm", "net-cn", "net-jaccard", "net-katz"};
    std::vector<std::string> methods = {"user", "hb1", "hb2"};
    std::vector<std::uint32_t> k_sweep = {5, 10, 25, 50, 75, 100, 125, 150};
    std::uint32_t k_items = 10;
    std::uint64_t seed = 42;
    std::string out_dir = "netcf-out";
    double threshold = 4.0;
    std::uint32_t list_size = 10;
    std::uint32_t bcri_t = 5;
    std::optional<double> katz_beta;                 // empty = auto
    std::string hybrid_user_source = "net-jaccard";  // structural, user axis
    std::string hybrid_item_source = "net-jaccard";  // structural, item axis
    std::string item_network_measure = "pcc";
    PccCentering pcc_centering = PccCentering::corated;
    ItemBaseline item_baseline = ItemBaseline::deviation;
    Hb1Form hb1_form = Hb1Form::joint;
    Fallback fallback = Fallback::mean;
    bool clamp = true;
    std::string cache_dir; // empty = no on-disk similarity cache

    MeasureOptions measure_options() const {
        return {pcc_centering, item_network_measure, katz_beta};
    }
};

/// Parses the plain key-value config format (`key = value`, `#` comments).
/// Unknown keys, malformed values and unregistered measure/method names
/// throw ConfigError.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

struct CellResult {
    std::string group;
    std::string series; // "<measure>-<method>" or "hb1"/"hb2"
    std::string measure;
    std::string method;
    std::uint32_t k = 0;
    EvaluationReport report;
};

struct RunResult {
    std::vector<CellResult> cells;
    std::uint64_t source_hash = 0;
    std::uint32_t n_users = 0, n_items = 0; // post-sparsification for setup 2
    std::size_t n_ratings = 0;
    double density = 0.0;
    std::vector<std::string> files_written;
};

/// Runs the configured experiment end to end; when write_files is set, per
/// cell reports, per-metric plot CSVs and a summary land in cfg.out_dir.
RunResult run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Emits one plot CSV per metric for one group: rows = K (ascending),
/// columns = series in registry order. Returns the paths written.
std::vector<std::string> emit_plot_data(const std::vector<CellResult>& cells,
                                        const std::string& group,
                                        const std::vector<std::uint32_t>& k_sweep,
                                        const std::vector<std::string>& series_order,
                                        const std::string& out_dir);

struct NanCountRow {
    std::string group;
    std::uint32_t members = 0;
    std::uint32_t sampled = 0;
    std::size_t undefined_pairs = 0;
    double per_anchor = 0.0;
};

/// Undefined-similarity census: samples entities per group and counts
/// Undefined scores against every other entity on the axis.
std::vector<NanCountRow> run_nan_count(const RatingMatrix& m, Axis axis,
                                       const std::vector<GroupRange>& groups,
                                       std::uint32_t sample_size, std::uint64_t seed,
                                       const std::string& measure = "pcc",
                                       const MeasureOptions& opts = {});

void write_nan_count_csv(const std::vector<NanCountRow>& rows, std::uint64_t dataset_hash,
                         std::uint64_t seed, const std::string& path);

struct BatchPredictionRow {
    std::string user_id;
    std::string item_id;
    Prediction prediction;
    bool unknown_ids = false;
};

/// Predicts the raw-id (user,item) pairs listed in a CSV (header optional)
/// and writes `user,item,predicted,neighbors_used,ir_used,fallback`.
/// Unknown ids abstain and are flagged.
std::vector<BatchPredictionRow> batch_predict(const RatingMatrix& train, const std::string& measure,
                                              const PredictorSpec& spec,
                                              const std::vector<std::pair<std::string, std::string>>& pairs,
                                              const MeasureOptions& opts = {});
void write_batch_predictions_csv(const std::vector<BatchPredictionRow>& rows,
                                 const std::string& path);
std::vector<std::pair<std::string, std::string>> read_pairs_csv(const std::string& path);

} // namespace netcf

#endif
