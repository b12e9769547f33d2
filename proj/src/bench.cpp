#include "bench.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"

#include "errors.hpp"
#include "rng.hpp"

namespace netcf {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            auto t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur += c;
        }
    }
    auto t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

GroupRange parse_group_range(const std::string& s) {
    auto dash = s.find('-');
    if (dash == std::string::npos)
        throw ConfigError("group range '" + s + "' must look like lo-hi or lo-");
    GroupRange g;
    try {
        g.lo = static_cast<std::uint32_t>(std::stoul(trim(s.substr(0, dash))));
        auto hi = trim(s.substr(dash + 1));
        if (!hi.empty()) g.hi = static_cast<std::uint32_t>(std::stoul(hi));
    } catch (const std::exception&) {
        throw ConfigError("group range '" + s + "' has non-numeric bounds");
    }
    if (g.hi && *g.hi < g.lo) throw ConfigError("group range '" + s + "' is inverted");
    return g;
}

long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects an integer, got '" + v + "'");
    }
}

double parse_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "' expects a boolean, got '" + v + "'");
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.dataset.empty()) throw ConfigError("config key 'dataset' is required");
    if (cfg.setup != 1 && cfg.setup != 2) throw ConfigError("setup must be 1 or 2");
    if (cfg.k_sweep.empty()) throw ConfigError("k_sweep must not be empty");
    if (!std::is_sorted(cfg.k_sweep.begin(), cfg.k_sweep.end()) ||
        std::adjacent_find(cfg.k_sweep.begin(), cfg.k_sweep.end()) != cfg.k_sweep.end())
        throw ConfigError("k_sweep must be strictly ascending");
    for (auto k : cfg.k_sweep)
        if (k < 1) throw ConfigError("k_sweep entries must be >= 1");
    if (cfg.k_items < 1) throw ConfigError("k_i must be >= 1");
    if (cfg.deletions < 1) throw ConfigError("deletions must be >= 1");
    if (cfg.sparsify_fraction < 0.0 || cfg.sparsify_fraction >= 1.0)
        throw ConfigError("sparsify_fraction must lie in [0, 1)");
    if (cfg.measures.empty()) throw ConfigError("measures must not be empty");
    const auto& registry = measure_registry();
    for (const auto& m : cfg.measures)
        if (std::find(registry.begin(), registry.end(), m) == registry.end())
            throw ConfigError("unknown measure '" + m + "'; available: " + registry_string());
    if (cfg.methods.empty()) throw ConfigError("methods must not be empty");
    for (const auto& m : cfg.methods) parse_method_name(m); // throws on unknown
    for (const auto* src : {&cfg.hybrid_user_source, &cfg.hybrid_item_source})
        if (!is_structural_measure(*src))
            throw ConfigError("hybrid similarity source '" + *src +
                              "' must be structural (net-cn, net-jaccard or net-katz)");
    if (cfg.setup == 1 && cfg.groups.empty()) throw ConfigError("setup 1 needs at least one group");
    if (cfg.sample_size < 1) throw ConfigError("sample_size must be >= 1");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    bool groups_set = false;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        if (key == "dataset") cfg.dataset = value;
        else if (key == "format") cfg.format = parse_format_name(value);
        else if (key == "rating_lo") cfg.domain.lo = static_cast<int>(parse_int(value, key));
        else if (key == "rating_hi") cfg.domain.hi = static_cast<int>(parse_int(value, key));
        else if (key == "setup") cfg.setup = static_cast<int>(parse_int(value, key));
        else if (key == "axis") {
            if (value == "user") cfg.axis = Axis::user;
            else if (value == "item") cfg.axis = Axis::item;
            else throw ConfigError("axis must be user or item, got '" + value + "'");
        } else if (key == "groups") {
            cfg.groups.clear();
            for (const auto& g : split_list(value, ',')) cfg.groups.push_back(parse_group_range(g));
            groups_set = true;
        } else if (key == "sample_size") cfg.sample_size = static_cast<std::uint32_t>(parse_int(value, key));
        else if (key == "deletions") cfg.deletions = static_cast<std::uint32_t>(parse_int(value, key));
        else if (key == "sparsify_fraction") cfg.sparsify_fraction = parse_real(value, key);
        else if (key == "measures") cfg.measures = split_list(value, ',');
        else if (key == "methods") cfg.methods = split_list(value, ',');
        else if (key == "k_sweep") {
            cfg.k_sweep.clear();
            for (const auto& k : split_list(value, ','))
                cfg.k_sweep.push_back(static_cast<std::uint32_t>(parse_int(k, key)));
        } else if (key == "k_i") cfg.k_items = static_cast<std::uint32_t>(parse_int(value, key));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
        else if (key == "out") cfg.out_dir = value;
        else if (key == "threshold") cfg.threshold = parse_real(value, key);
        else if (key == "list_size") cfg.list_size = static_cast<std::uint32_t>(parse_int(value, key));
        else if (key == "bcri_t") cfg.bcri_t = static_cast<std::uint32_t>(parse_int(value, key));
        else if (key == "beta") {
            if (value == "auto") cfg.katz_beta.reset();
            else cfg.katz_beta = parse_real(value, key);
        } else if (key == "hybrid_user_source") cfg.hybrid_user_source = value;
        else if (key == "hybrid_item_source") cfg.hybrid_item_source = value;
        else if (key == "item_network_measure") cfg.item_network_measure = value;
        else if (key == "pcc_centering") {
            if (value == "corated") cfg.pcc_centering = PccCentering::corated;
            else if (value == "global") cfg.pcc_centering = PccCentering::global;
            else throw ConfigError("pcc_centering must be corated or global");
        } else if (key == "item_baseline") {
            if (value == "deviation") cfg.item_baseline = ItemBaseline::deviation;
            else if (value == "weighted-average") cfg.item_baseline = ItemBaseline::weighted_average;
            else throw ConfigError("item_baseline must be deviation or weighted-average");
        } else if (key == "hb1_form") {
            if (value == "joint") cfg.hb1_form = Hb1Form::joint;
            else if (value == "split-terms") cfg.hb1_form = Hb1Form::split_terms;
            else throw ConfigError("hb1_form must be joint or split-terms");
        } else if (key == "fallback") {
            if (value == "mean") cfg.fallback = Fallback::mean;
            else if (value == "skip") cfg.fallback = Fallback::skip;
            else throw ConfigError("fallback must be mean or skip");
        } else if (key == "clamp") cfg.clamp = parse_bool(value, key);
        else if (key == "cache") cfg.cache_dir = value;
        else throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (cfg.setup == 2 && !groups_set) cfg.groups.clear();
    validate(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

namespace {

/// Lazily computes similarity matrices for one train matrix, backed by the
/// optional on-disk cache keyed on (train hash, measure, axis).
class SimilarityProvider {
public:
    SimilarityProvider(const RatingMatrix& train, const MeasureOptions& opts,
                       std::string cache_dir)
        : train_(&train), opts_(opts), cache_dir_(std::move(cache_dir)),
          train_hash_(train.content_hash()) {}

    const SimilarityMatrix& get(const std::string& measure, Axis axis) {
        std::string key = measure + "|" + axis_name(axis);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;

        std::string path;
        if (!cache_dir_.empty()) {
            path = cache_dir_ + "/sim_" + hex64(train_hash_) + "_" + measure + "_" +
                   axis_name(axis) + ".bin";
            if (auto loaded = load_similarity_cache(path, train_hash_, measure, axis)) {
                auto& slot = cache_[key];
                slot = std::make_unique<SimilarityMatrix>(std::move(*loaded));
                return *slot;
            }
        }
        auto computed = compute_measure(*train_, measure, axis, opts_);
        if (!path.empty()) {
            std::filesystem::create_directories(cache_dir_);
            save_similarity_cache(computed, train_hash_, path);
        }
        auto& slot = cache_[key];
        slot = std::make_unique<SimilarityMatrix>(std::move(computed));
        return *slot;
    }

    std::uint64_t train_hash() const { return train_hash_; }

private:
    const RatingMatrix* train_;
    MeasureOptions opts_;
    std::string cache_dir_;
    std::uint64_t train_hash_;
    std::map<std::string, std::unique_ptr<SimilarityMatrix>> cache_;
};

struct Series {
    std::string name;
    Method method;
    std::string measure; // hybrid sources joined for hb1/hb2
};

std::vector<Series> build_series(const ExperimentConfig& cfg) {
    std::vector<Series> out;
    for (const auto& method_name_str : cfg.methods) {
        Method method = parse_method_name(method_name_str);
        if (method == Method::user || method == Method::item) {
            for (const auto& measure : cfg.measures) {
                if (measure == "adjcos" && method == Method::user) continue; // item-only measure
                out.push_back({measure + "-" + method_name_str, method, measure});
            }
        } else {
            out.push_back({method_name_str, method,
                           cfg.hybrid_user_source + "+" + cfg.hybrid_item_source});
        }
    }
    return out;
}

struct TestCell {
    std::uint32_t counterpart;
    double actual;
};

std::string metadata_comment(const ExperimentConfig& cfg, std::uint64_t source_hash,
                             std::uint64_t train_hash, std::uint64_t split_seed,
                             const std::string& group, const Series* series,
                             std::uint32_t k) {
    std::ostringstream out;
    out << "# netcf v1\n";
    out << "# dataset=" << cfg.dataset << " source_hash=" << hex64(source_hash)
        << " train_hash=" << hex64(train_hash) << "\n";
    out << "# seed=" << cfg.seed << " split_seed=" << split_seed << " setup=" << cfg.setup
        << " axis=" << axis_name(cfg.axis) << " group=" << group << "\n";
    if (series)
        out << "# series=" << series->name << " method=" << method_name(series->method)
            << " measure=" << series->measure << " K=" << k << "\n";
    out << "# sample_size=" << cfg.sample_size << " deletions=" << cfg.deletions
        << " k_i=" << cfg.k_items << " threshold=" << fmt_double(cfg.threshold)
        << " list_size=" << cfg.list_size << " bcri_t=" << cfg.bcri_t
        << " sparsify_fraction=" << fmt_double(cfg.setup == 2 ? cfg.sparsify_fraction : 0.0)
        << " fallback=" << (cfg.fallback == Fallback::mean ? "mean" : "skip")
        << " clamp=" << (cfg.clamp ? 1 : 0) << "\n";
    return out.str();
}

void write_report_csv(const std::string& path, const std::string& header_comment,
                      const EvaluationReport& r) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);
    out << header_comment;
    out << "entity,n_test,n_valued,rmse,mae,precision,recall,f1,f1_applicable,bcri,bcri_t,"
           "bcri_truncated\n";
    for (const auto& e : r.per_entity) {
        out << e.entity_id << ',' << e.n_test << ',' << e.n_valued << ','
            << (e.rmse ? fmt_double(*e.rmse) : "") << ',' << (e.mae ? fmt_double(*e.mae) : "")
            << ',' << fmt_double(e.f1.precision) << ',' << fmt_double(e.f1.recall) << ','
            << fmt_double(e.f1.f1) << ',' << (e.f1.applicable ? 1 : 0) << ',' << e.bcri.overlap
            << ',' << e.bcri.t_used << ',' << (e.bcri.truncated ? 1 : 0) << '\n';
    }
    std::size_t total_tests = 0, total_valued = 0;
    for (const auto& e : r.per_entity) {
        total_tests += e.n_test;
        total_valued += e.n_valued;
    }
    out << "aggregate," << total_tests << ',' << total_valued << ',' << fmt_double(r.rmse) << ','
        << fmt_double(r.mae) << ',' << fmt_double(r.precision) << ',' << fmt_double(r.recall)
        << ',' << fmt_double(r.f1) << ',' << fmt_double(r.f1_applicable) << ','
        << fmt_double(r.bcri) << ",,\n";
    out << "# undefined_similarity_pairs=" << r.undefined_similarity_count
        << " abstained=" << r.abstained_count
        << " f1_inapplicable=" << r.f1_inapplicable_count << "\n";
    if (!out) throw IoError("write failed: " + path);
}

} // namespace

std::vector<std::string> emit_plot_data(const std::vector<CellResult>& cells,
                                        const std::string& group,
                                        const std::vector<std::uint32_t>& k_sweep,
                                        const std::vector<std::string>& series_order,
                                        const std::string& out_dir) {
    static const std::vector<std::pair<std::string, double EvaluationReport::*>> metrics = {
        {"rmse", &EvaluationReport::rmse},   {"mae", &EvaluationReport::mae},
        {"precision", &EvaluationReport::precision}, {"recall", &EvaluationReport::recall},
        {"f1", &EvaluationReport::f1},       {"bcri", &EvaluationReport::bcri}};

    std::map<std::pair<std::string, std::uint32_t>, const EvaluationReport*> lookup;
    for (const auto& c : cells)
        if (c.group == group) lookup[{c.series, c.k}] = &c.report;

    std::vector<std::string> written;
    for (const auto& [metric_name, member] : metrics) {
        std::string path = out_dir + "/plot_" + group + "_" + metric_name + ".csv";
        std::ofstream out(path);
        if (!out) throw IoError("cannot write plot csv: " + path);
        out << "K";
        for (const auto& s : series_order) out << ',' << s;
        out << '\n';
        if (!cells.empty()) {
            for (auto k : k_sweep) {
                out << k;
                for (const auto& s : series_order) {
                    out << ',';
                    auto it = lookup.find({s, k});
                    if (it != lookup.end()) out << fmt_double(it->second->*member);
                }
                out << '\n';
            }
        }
        if (!out) throw IoError("write failed: " + path);
        written.push_back(path);
    }
    return written;
}

RunResult run_experiment(const ExperimentConfig& cfg, bool write_files) {
    RatingMatrix matrix = load_ratings(cfg.dataset, cfg.format, cfg.domain);
    if (cfg.setup == 2)
        matrix = sparsify(matrix, cfg.sparsify_fraction, cfg.axis, Rng::mix(cfg.seed, 0x5FA12));

    RunResult result;
    result.source_hash = matrix.content_hash();
    result.n_users = matrix.n_users();
    result.n_items = matrix.n_items();
    result.n_ratings = matrix.n_ratings();
    result.density = matrix.density();

    if (write_files) std::filesystem::create_directories(cfg.out_dir);

    std::vector<GroupRange> groups =
        cfg.setup == 1 ? cfg.groups : std::vector<GroupRange>{{1, std::nullopt}};
    auto series_list = build_series(cfg);
    MeasureOptions opts = cfg.measure_options();

    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto grp = group_by_count(matrix, cfg.axis, groups[gi].lo, groups[gi].hi);
        std::string group_label = cfg.setup == 2 ? "all" : grp.label();
        std::uint64_t split_seed = Rng::mix(cfg.seed, gi);
        auto split = holdout_split(matrix, grp, cfg.sample_size, cfg.deletions, split_seed);
        TrainContext ctx(split.train);
        SimilarityProvider provider(split.train, opts, cfg.cache_dir);

        // Held-out cells per sampled entity, counterparts ascending.
        std::map<std::uint32_t, std::vector<TestCell>> by_entity;
        for (const auto& t : split.test) {
            std::uint32_t e = cfg.axis == Axis::user ? t.user : t.item;
            std::uint32_t c = cfg.axis == Axis::user ? t.item : t.user;
            by_entity[e].push_back({c, t.value});
        }
        for (auto& [e, cells] : by_entity)
            std::sort(cells.begin(), cells.end(),
                      [](const TestCell& a, const TestCell& b) { return a.counterpart < b.counterpart; });

        for (const auto& series : series_list) {
            const SimilarityMatrix* user_sim = nullptr;
            const SimilarityMatrix* item_sim = nullptr;
            Axis selection_axis = Axis::user;
            switch (series.method) {
                case Method::user:
                    user_sim = &provider.get(series.measure, Axis::user);
                    selection_axis = Axis::user;
                    break;
                case Method::item:
                    item_sim = &provider.get(series.measure, Axis::item);
                    selection_axis = Axis::item;
                    break;
                case Method::hb1:
                case Method::hb2:
                    user_sim = &provider.get(cfg.hybrid_user_source, Axis::user);
                    item_sim = &provider.get(cfg.hybrid_item_source, Axis::item);
                    selection_axis = Axis::user;
                    break;
            }
            const SimilarityMatrix& selection_sim =
                selection_axis == Axis::user ? *user_sim : *item_sim;

            // Undefined-similarity census for this cell: anchors are the
            // entities neighbor selection starts from.
            std::vector<std::uint32_t> anchors;
            for (const auto& [e, cells] : by_entity) {
                if (selection_axis == cfg.axis) {
                    anchors.push_back(e);
                } else {
                    for (const auto& c : cells) anchors.push_back(c.counterpart);
                }
            }
            std::sort(anchors.begin(), anchors.end());
            anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
            std::vector<std::uint32_t> all(selection_sim.size());
            for (std::uint32_t i = 0; i < selection_sim.size(); ++i) all[i] = i;
            std::size_t undefined = count_undefined(selection_sim, anchors, all);

            for (auto k : cfg.k_sweep) {
                PredictorSpec spec;
                spec.method = series.method;
                spec.k = k;
                spec.k_items = cfg.k_items;
                spec.fallback = cfg.fallback;
                spec.clamp = cfg.clamp;
                spec.item_baseline = cfg.item_baseline;
                spec.hb1_form = cfg.hb1_form;

                std::vector<EntityMetrics> per_entity;
                for (const auto& [e, cells] : by_entity) {
                    EntityMetrics em;
                    em.entity_id = cfg.axis == Axis::user ? split.train.user_id(e)
                                                          : split.train.item_id(e);
                    em.n_test = static_cast<std::uint32_t>(cells.size());
                    std::map<std::uint32_t, PredictedValue> predicted;
                    std::map<std::uint32_t, double> actual;
                    std::vector<double> errors;
                    for (const auto& cell : cells) {
                        std::uint32_t u = cfg.axis == Axis::user ? e : cell.counterpart;
                        std::uint32_t i = cfg.axis == Axis::user ? cell.counterpart : e;
                        Prediction p = predict(ctx, user_sim, item_sim, u, i, spec);
                        actual[cell.counterpart] = cell.actual;
                        if (p.abstained) {
                            predicted[cell.counterpart] = std::nullopt;
                        } else {
                            predicted[cell.counterpart] = p.value;
                            errors.push_back(p.value - cell.actual);
                            ++em.n_valued;
                        }
                    }
                    if (!errors.empty()) {
                        em.rmse = rmse(errors);
                        em.mae = mae(errors);
                    }
                    em.f1 = f1_score(predicted, actual, cfg.threshold, cfg.list_size);
                    em.bcri = bcri(predicted, actual, cfg.bcri_t);
                    per_entity.push_back(std::move(em));
                }

                CellResult cell;
                cell.group = group_label;
                cell.series = series.name;
                cell.measure = series.measure;
                cell.method = method_name(series.method);
                cell.k = k;
                cell.report = aggregate_report(std::move(per_entity));
                cell.report.undefined_similarity_count = undefined;

                if (write_files) {
                    std::string path = cfg.out_dir + "/report_" + group_label + "_" + series.name +
                                       "_k" + std::to_string(k) + ".csv";
                    write_report_csv(path,
                                     metadata_comment(cfg, result.source_hash,
                                                      provider.train_hash(), split_seed,
                                                      group_label, &series, k),
                                     cell.report);
                    result.files_written.push_back(path);
                }
                result.cells.push_back(std::move(cell));
            }
        }

        if (write_files) {
            std::vector<std::string> series_order;
            for (const auto& s : series_list) series_order.push_back(s.name);
            auto paths =
                emit_plot_data(result.cells, group_label, cfg.k_sweep, series_order, cfg.out_dir);
            result.files_written.insert(result.files_written.end(), paths.begin(), paths.end());
        }
    }

    if (write_files) {
        std::string path = cfg.out_dir + "/summary.csv";
        std::ofstream out(path);
        if (!out) throw IoError("cannot write summary: " + path);
        out << metadata_comment(cfg, result.source_hash, 0, 0, "-", nullptr, 0);
        out << "# post_dims_users=" << result.n_users << " post_dims_items=" << result.n_items
            << " ratings=" << result.n_ratings << " density=" << fmt_double(result.density)
            << "\n";
        out << "group,series,K,rmse,mae,precision,recall,f1,f1_applicable,bcri,"
               "undefined_pairs,abstained,entities\n";
        for (const auto& c : result.cells) {
            const auto& r = c.report;
            out << c.group << ',' << c.series << ',' << c.k << ',' << fmt_double(r.rmse) << ','
                << fmt_double(r.mae) << ',' << fmt_double(r.precision) << ','
                << fmt_double(r.recall) << ',' << fmt_double(r.f1) << ','
                << fmt_double(r.f1_applicable) << ',' << fmt_double(r.bcri) << ','
                << r.undefined_similarity_count << ',' << r.abstained_count << ','
                << r.entities_evaluated << '\n';
        }
        if (!out) throw IoError("write failed: " + path);
        result.files_written.push_back(path);

        // Structured counterpart of summary.csv.
        nlohmann::json doc;
        doc["seed"] = cfg.seed;
        doc["setup"] = cfg.setup;
        doc["axis"] = axis_name(cfg.axis);
        doc["dataset"] = cfg.dataset;
        doc["source_hash"] = hex64(result.source_hash);
        doc["dims"] = {{"users", result.n_users},
                       {"items", result.n_items},
                       {"ratings", result.n_ratings},
                       {"density", result.density}};
        doc["cells"] = nlohmann::json::array();
        for (const auto& c : result.cells) {
            const auto& r = c.report;
            doc["cells"].push_back({{"group", c.group},
                                    {"series", c.series},
                                    {"measure", c.measure},
                                    {"method", c.method},
                                    {"k", c.k},
                                    {"rmse", r.rmse},
                                    {"mae", r.mae},
                                    {"precision", r.precision},
                                    {"recall", r.recall},
                                    {"f1", r.f1},
                                    {"f1_applicable", r.f1_applicable},
                                    {"bcri", r.bcri},
                                    {"undefined_similarity_pairs", r.undefined_similarity_count},
                                    {"abstained", r.abstained_count},
                                    {"entities", r.entities_evaluated}});
        }
        std::string json_path = cfg.out_dir + "/summary.json";
        std::ofstream jout(json_path);
        if (!jout) throw IoError("cannot write summary: " + json_path);
        jout << doc.dump(2) << '\n';
        if (!jout) throw IoError("write failed: " + json_path);
        result.files_written.push_back(json_path);
    }
    return result;
}

std::vector<NanCountRow> run_nan_count(const RatingMatrix& m, Axis axis,
                                       const std::vector<GroupRange>& groups,
                                       std::uint32_t sample_size, std::uint64_t seed,
                                       const std::string& measure, const MeasureOptions& opts) {
    auto sim = compute_measure(m, measure, axis, opts);
    std::vector<std::uint32_t> all(m.n(axis));
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;

    std::vector<NanCountRow> rows;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto grp = group_by_count(m, axis, groups[gi].lo, groups[gi].hi);
        NanCountRow row;
        row.group = grp.label();
        row.members = static_cast<std::uint32_t>(grp.members.size());
        if (!grp.members.empty()) {
            Rng rng(Rng::mix(seed, gi));
            auto picks = rng.sample(row.members, std::min(sample_size, row.members));
            std::vector<std::uint32_t> anchors;
            anchors.reserve(picks.size());
            for (auto p : picks) anchors.push_back(grp.members[p]);
            row.sampled = static_cast<std::uint32_t>(anchors.size());
            row.undefined_pairs = count_undefined(sim, anchors, all);
            row.per_anchor = row.sampled == 0
                                 ? 0.0
                                 : static_cast<double>(row.undefined_pairs) / row.sampled;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_nan_count_csv(const std::vector<NanCountRow>& rows, std::uint64_t dataset_hash,
                         std::uint64_t seed, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write nan-count csv: " + path);
    out << "# netcf v1 dataset_hash=" << hex64(dataset_hash) << " seed=" << seed << "\n";
    out << "group,members,sampled,undefined_pairs,per_anchor\n";
    for (const auto& r : rows)
        out << r.group << ',' << r.members << ',' << r.sampled << ',' << r.undefined_pairs << ','
            << fmt_double(r.per_anchor) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

std::vector<BatchPredictionRow> batch_predict(const RatingMatrix& train, const std::string& measure,
                                              const PredictorSpec& spec,
                                              const std::vector<std::pair<std::string, std::string>>& pairs,
                                              const MeasureOptions& opts) {
    TrainContext ctx(train);
    // Hybrids take the given measure as both structural sources when it is
    // structural, and the default network Jaccard otherwise.
    std::string hybrid_source = is_structural_measure(measure) ? measure : "net-jaccard";
    bool hybrid = spec.method == Method::hb1 || spec.method == Method::hb2;
    std::unique_ptr<SimilarityMatrix> user_sim, item_sim;
    if (spec.method == Method::user || hybrid)
        user_sim = std::make_unique<SimilarityMatrix>(compute_measure(
            train, hybrid ? hybrid_source : measure, Axis::user, opts));
    if (spec.method == Method::item || hybrid)
        item_sim = std::make_unique<SimilarityMatrix>(compute_measure(
            train, hybrid ? hybrid_source : measure, Axis::item, opts));

    std::vector<BatchPredictionRow> rows;
    rows.reserve(pairs.size());
    for (const auto& [user_raw, item_raw] : pairs) {
        BatchPredictionRow row;
        row.user_id = user_raw;
        row.item_id = item_raw;
        auto u = train.find_user(user_raw);
        auto i = train.find_item(item_raw);
        if (!u || !i) {
            row.unknown_ids = true;
            row.prediction.abstained = true;
        } else {
            row.prediction = predict(ctx, user_sim.get(), item_sim.get(), *u, *i, spec);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_batch_predictions_csv(const std::vector<BatchPredictionRow>& rows,
                                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write predictions: " + path);
    out << "user,item,predicted,neighbors_used,ir_used,fallback\n";
    for (const auto& r : rows) {
        out << r.user_id << ',' << r.item_id << ',';
        if (!r.prediction.abstained) out << fmt_double(r.prediction.value);
        out << ',' << r.prediction.neighbors_used << ',' << r.prediction.intermediate_used << ','
            << (r.prediction.used_fallback ? 1 : 0) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<std::pair<std::string, std::string>> read_pairs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pairs file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError("expected user,item", lineno);
        std::string user = trim(line.substr(0, comma));
        std::string item = trim(line.substr(comma + 1));
        if (lineno == 1 && (user == "user" || user == "user_id")) continue; // header
        pairs.emplace_back(std::move(user), std::move(item));
    }
    return pairs;
}

} // namespace netcf
