#include "netcf/netcf.h"

#include <cstring>
#include <memory>
#include <string>

#include "bench.hpp"
#include "errors.hpp"
#include "measures.hpp"
#include "network.hpp"
#include "predict.hpp"
#include "synth.hpp"

using namespace netcf;

struct netcf_matrix {
    RatingMatrix m;
};
struct netcf_similarity {
    SimilarityMatrix s;
};
struct netcf_network {
    Network g;
};
struct netcf_predictor {
    RatingMatrix train;
    std::unique_ptr<TrainContext> ctx;
    std::unique_ptr<SimilarityMatrix> user_sim, item_sim;
    PredictorSpec spec;
};

namespace {

thread_local std::string t_last_error;

netcf_status fail(netcf_status code, const std::string& message) {
    t_last_error = message;
    return code;
}

netcf_status run(auto&& body) {
    try {
        body();
        t_last_error.clear();
        return NETCF_OK;
    } catch (const ParseError& e) {
        return fail(NETCF_ERR_PARSE, e.what());
    } catch (const ValidationError& e) {
        return fail(NETCF_ERR_VALIDATION, e.what());
    } catch (const ConfigError& e) {
        return fail(NETCF_ERR_CONFIG, e.what());
    } catch (const ConvergenceError& e) {
        return fail(NETCF_ERR_CONVERGENCE, e.what());
    } catch (const IoError& e) {
        return fail(NETCF_ERR_IO, e.what());
    } catch (const DomainError& e) {
        return fail(NETCF_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(NETCF_ERR_INTERNAL, e.what());
    }
}

Axis parse_axis(const char* axis) {
    if (axis && std::strcmp(axis, "user") == 0) return Axis::user;
    if (axis && std::strcmp(axis, "item") == 0) return Axis::item;
    throw DomainError(std::string("axis must be user or item, got '") + (axis ? axis : "") + "'");
}

Fallback parse_fallback(const char* fb) {
    if (!fb || std::strcmp(fb, "mean") == 0) return Fallback::mean;
    if (std::strcmp(fb, "skip") == 0) return Fallback::skip;
    throw DomainError(std::string("fallback must be mean or skip, got '") + fb + "'");
}

template <typename T>
void require(const T* p, const char* what) {
    if (!p) throw DomainError(std::string("null ") + what + " handle");
}

} // namespace

extern "C" {

const char* netcf_version(void) { return "1.0.0"; }

const char* netcf_status_name(netcf_status status) {
    switch (status) {
        case NETCF_OK: return "ok";
        case NETCF_ERR_IO: return "io-error";
        case NETCF_ERR_PARSE: return "parse-error";
        case NETCF_ERR_VALIDATION: return "validation-error";
        case NETCF_ERR_CONFIG: return "config-error";
        case NETCF_ERR_ARGUMENT: return "argument-error";
        case NETCF_ERR_CONVERGENCE: return "convergence-error";
        case NETCF_ERR_UNDEFINED: return "undefined-similarity";
        case NETCF_ERR_ABSTAINED: return "abstained";
        case NETCF_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* netcf_last_error(void) { return t_last_error.c_str(); }

netcf_status netcf_matrix_load(const char* path, const char* format, int lo, int hi,
                               netcf_matrix** out) {
    return run([&] {
        require(path, "path");
        require(out, "output");
        FileFormat f = parse_format_name(format ? format : "auto");
        auto m = std::make_unique<netcf_matrix>();
        m->m = load_ratings(path, f, RatingDomain{lo, hi});
        *out = m.release();
    });
}

netcf_status netcf_matrix_synth(uint32_t n_users, uint32_t n_items, uint64_t n_ratings,
                                uint64_t seed, netcf_matrix** out) {
    return run([&] {
        require(out, "output");
        SynthParams p;
        p.n_users = n_users;
        p.n_items = n_items;
        p.target_ratings = n_ratings;
        p.seed = seed;
        auto m = std::make_unique<netcf_matrix>();
        m->m = synthesize_ratings(p);
        *out = m.release();
    });
}

void netcf_matrix_free(netcf_matrix* m) { delete m; }

netcf_status netcf_matrix_dims(const netcf_matrix* m, uint32_t* n_users, uint32_t* n_items,
                               uint64_t* n_ratings) {
    return run([&] {
        require(m, "matrix");
        if (n_users) *n_users = m->m.n_users();
        if (n_items) *n_items = m->m.n_items();
        if (n_ratings) *n_ratings = m->m.n_ratings();
    });
}

netcf_status netcf_matrix_density(const netcf_matrix* m, double* out) {
    return run([&] {
        require(m, "matrix");
        require(out, "output");
        *out = m->m.density();
    });
}

netcf_status netcf_matrix_hash(const netcf_matrix* m, uint64_t* out) {
    return run([&] {
        require(m, "matrix");
        require(out, "output");
        *out = m->m.content_hash();
    });
}

netcf_status netcf_matrix_export_csv(const netcf_matrix* m, const char* path) {
    return run([&] {
        require(m, "matrix");
        require(path, "path");
        write_canonical_csv(m->m, path);
    });
}

netcf_status netcf_matrix_sparsify(const netcf_matrix* m, double fraction, const char* axis,
                                   uint64_t seed, netcf_matrix** out) {
    return run([&] {
        require(m, "matrix");
        require(out, "output");
        auto r = std::make_unique<netcf_matrix>();
        r->m = sparsify(m->m, fraction, parse_axis(axis), seed);
        *out = r.release();
    });
}

netcf_status netcf_similarity_compute(const netcf_matrix* m, const char* measure,
                                      const char* axis, netcf_similarity** out) {
    return run([&] {
        require(m, "matrix");
        require(measure, "measure");
        require(out, "output");
        auto s = std::make_unique<netcf_similarity>();
        s->s = compute_measure(m->m, measure, parse_axis(axis));
        *out = s.release();
    });
}

void netcf_similarity_free(netcf_similarity* s) { delete s; }

netcf_status netcf_similarity_size(const netcf_similarity* s, uint32_t* out) {
    return run([&] {
        require(s, "similarity");
        require(out, "output");
        *out = s->s.size();
    });
}

netcf_status netcf_similarity_get(const netcf_similarity* s, uint32_t i, uint32_t j,
                                  double* out) {
    if (!s || !out) return fail(NETCF_ERR_ARGUMENT, "null handle");
    if (i >= s->s.size() || j >= s->s.size()) return fail(NETCF_ERR_ARGUMENT, "index out of range");
    auto v = s->s.get(i, j);
    if (!v) return fail(NETCF_ERR_UNDEFINED, "similarity undefined for this pair");
    *out = *v;
    t_last_error.clear();
    return NETCF_OK;
}

netcf_status netcf_similarity_undefined_pairs(const netcf_similarity* s, uint64_t* out) {
    return run([&] {
        require(s, "similarity");
        require(out, "output");
        *out = s->s.undefined_pairs();
    });
}

netcf_status netcf_similarity_export_csv(const netcf_similarity* s, const char* path) {
    return run([&] {
        require(s, "similarity");
        require(path, "path");
        export_similarity_csv(s->s, path);
    });
}

netcf_status netcf_similarity_save_cache(const netcf_similarity* s, const netcf_matrix* m,
                                         const char* path) {
    return run([&] {
        require(s, "similarity");
        require(m, "matrix");
        require(path, "path");
        save_similarity_cache(s->s, m->m.content_hash(), path);
    });
}

netcf_status netcf_similarity_load_cache(const char* path, const netcf_matrix* m,
                                         const char* measure, const char* axis,
                                         netcf_similarity** out) {
    return run([&] {
        require(path, "path");
        require(m, "matrix");
        require(measure, "measure");
        require(out, "output");
        auto loaded = load_similarity_cache(path, m->m.content_hash(), measure, parse_axis(axis));
        if (!loaded) throw IoError("cache miss or key mismatch: " + std::string(path));
        auto s = std::make_unique<netcf_similarity>();
        s->s = std::move(*loaded);
        *out = s.release();
    });
}

netcf_status netcf_network_build(const netcf_similarity* s, netcf_network** out) {
    return run([&] {
        require(s, "similarity");
        require(out, "output");
        auto g = std::make_unique<netcf_network>();
        g->g = Network::from_similarity(s->s);
        *out = g.release();
    });
}

void netcf_network_free(netcf_network* g) { delete g; }

netcf_status netcf_network_edge_count(const netcf_network* g, uint64_t* out) {
    return run([&] {
        require(g, "network");
        require(out, "output");
        *out = g->g.edge_count();
    });
}

netcf_status netcf_network_export_csv(const netcf_network* g, const char* path) {
    return run([&] {
        require(g, "network");
        require(path, "path");
        g->g.export_edge_csv(path);
    });
}

netcf_status netcf_network_spectral_radius(const netcf_network* g, double* out) {
    return run([&] {
        require(g, "network");
        require(out, "output");
        *out = spectral_radius(g->g);
    });
}

netcf_status netcf_network_structural(const netcf_network* g, const char* kind, double beta,
                                      netcf_similarity** out) {
    return run([&] {
        require(g, "network");
        require(kind, "kind");
        require(out, "output");
        std::string name = kind;
        StructuralSimilarity ss = [&] {
            if (name == "net-cn") return common_neighbors(g->g);
            if (name == "net-jaccard") return jaccard_network(g->g);
            if (name == "net-katz")
                return katz(g->g, beta > 0 ? std::optional<double>(beta) : std::nullopt);
            throw DomainError("structural kind must be net-cn, net-jaccard or net-katz");
        }();
        auto s = std::make_unique<netcf_similarity>();
        s->s = ss.to_similarity(name, g->g.content_hash());
        *out = s.release();
    });
}

netcf_status netcf_predictor_new(const netcf_matrix* train, const char* method,
                                 const char* measure, uint32_t k, uint32_t k_items,
                                 const char* fallback, int clamp, netcf_predictor** out) {
    return run([&] {
        require(train, "matrix");
        require(method, "method");
        require(measure, "measure");
        require(out, "output");
        auto p = std::make_unique<netcf_predictor>();
        p->train = train->m;
        p->ctx = std::make_unique<TrainContext>(p->train);
        p->spec.method = parse_method_name(method);
        p->spec.k = k;
        p->spec.k_items = k_items == 0 ? 10 : k_items;
        p->spec.fallback = parse_fallback(fallback);
        p->spec.clamp = clamp != 0;

        std::string m = measure;
        bool hybrid = p->spec.method == Method::hb1 || p->spec.method == Method::hb2;
        std::string hybrid_source = is_structural_measure(m) ? m : "net-jaccard";
        if (p->spec.method == Method::user || hybrid)
            p->user_sim = std::make_unique<SimilarityMatrix>(
                compute_measure(p->train, hybrid ? hybrid_source : m, Axis::user));
        if (p->spec.method == Method::item || hybrid)
            p->item_sim = std::make_unique<SimilarityMatrix>(
                compute_measure(p->train, hybrid ? hybrid_source : m, Axis::item));
        *out = p.release();
    });
}

void netcf_predictor_free(netcf_predictor* p) { delete p; }

netcf_status netcf_predictor_predict(const netcf_predictor* p, const char* user_id,
                                     const char* item_id, netcf_prediction* out) {
    if (!p || !user_id || !item_id || !out) return fail(NETCF_ERR_ARGUMENT, "null handle");
    auto u = p->train.find_user(user_id);
    auto i = p->train.find_item(item_id);
    if (!u || !i)
        return fail(NETCF_ERR_ARGUMENT, std::string("unknown id: ") + (!u ? user_id : item_id));
    Prediction pr;
    auto status = run(
        [&] { pr = predict(*p->ctx, p->user_sim.get(), p->item_sim.get(), *u, *i, p->spec); });
    if (status != NETCF_OK) return status;
    out->value = pr.value;
    out->raw = pr.raw;
    out->abstained = pr.abstained ? 1 : 0;
    out->used_fallback = pr.used_fallback ? 1 : 0;
    out->neighbors_used = pr.neighbors_used;
    out->intermediate_used = pr.intermediate_used;
    if (pr.abstained) return fail(NETCF_ERR_ABSTAINED, "prediction abstained");
    return NETCF_OK;
}

netcf_status netcf_run_config(const char* config_path, int64_t seed_override,
                              const char* out_override) {
    return run([&] {
        require(config_path, "config path");
        ExperimentConfig cfg = parse_config_file(config_path);
        if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
        if (out_override && *out_override) cfg.out_dir = out_override;
        run_experiment(cfg, true);
    });
}

netcf_status netcf_nan_count(const char* dataset, const char* format, int lo, int hi,
                             const char* axis, const char* groups, uint32_t sample_size,
                             uint64_t seed, const char* measure, const char* out_csv) {
    return run([&] {
        require(dataset, "dataset");
        require(groups, "groups");
        require(out_csv, "output path");
        RatingMatrix m =
            load_ratings(dataset, parse_format_name(format ? format : "auto"), RatingDomain{lo, hi});
        std::vector<GroupRange> ranges;
        std::string spec(groups), cur;
        for (char c : spec + ",") {
            if (c == ',') {
                if (!cur.empty()) {
                    auto dash = cur.find('-');
                    if (dash == std::string::npos)
                        throw DomainError("group range '" + cur + "' must look like lo-hi or lo-");
                    GroupRange g;
                    g.lo = static_cast<std::uint32_t>(std::stoul(cur.substr(0, dash)));
                    auto rest = cur.substr(dash + 1);
                    if (!rest.empty()) g.hi = static_cast<std::uint32_t>(std::stoul(rest));
                    ranges.push_back(g);
                }
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                cur += c;
            }
        }
        auto rows = run_nan_count(m, parse_axis(axis), ranges, sample_size, seed,
                                  measure && *measure ? measure : "pcc");
        write_nan_count_csv(rows, m.content_hash(), seed, out_csv);
    });
}

netcf_status netcf_batch_predict(const netcf_matrix* train, const char* method,
                                 const char* measure, uint32_t k, uint32_t k_items,
                                 const char* fallback, int clamp, const char* pairs_csv,
                                 const char* out_csv) {
    return run([&] {
        require(train, "matrix");
        require(method, "method");
        require(measure, "measure");
        require(pairs_csv, "pairs path");
        require(out_csv, "output path");
        PredictorSpec spec;
        spec.method = parse_method_name(method);
        spec.k = k;
        spec.k_items = k_items == 0 ? 10 : k_items;
        spec.fallback = parse_fallback(fallback);
        spec.clamp = clamp != 0;
        auto pairs = read_pairs_csv(pairs_csv);
        auto rows = batch_predict(train->m, measure, spec, pairs);
        write_batch_predictions_csv(rows, out_csv);
    });
}

} // extern "C"
