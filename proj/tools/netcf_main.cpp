// netcf command line: benchmark runner, similarity cache prebuilder,
// undefined-similarity census, batch prediction and synthetic data.
// Everything goes through the public C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "netcf/netcf.h"

namespace {

int report_failure(netcf_status status) {
    std::fprintf(stderr, "netcf: %s: %s\n", netcf_status_name(status), netcf_last_error());
    return static_cast<int>(status);
}

struct MatrixHandle {
    netcf_matrix* m = nullptr;
    ~MatrixHandle() { netcf_matrix_free(m); }
};

struct SimilarityHandle {
    netcf_similarity* s = nullptr;
    ~SimilarityHandle() { netcf_similarity_free(s); }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"neighborhood collaborative filtering over similarity networks"};
    app.require_subcommand(1);

    // run
    std::string run_config, run_out;
    std::int64_t run_seed = -1;
    auto* run = app.add_subcommand("run", "run an experiment config end to end");
    run->add_option("--config", run_config, "experiment config file")->required();
    run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--out", run_out, "override the output directory");

    // sim
    std::string sim_dataset, sim_format = "auto", sim_measure, sim_axis = "user";
    std::string sim_cache, sim_export;
    int sim_lo = 1, sim_hi = 5;
    auto* sim = app.add_subcommand("sim", "prebuild a similarity matrix cache");
    sim->add_option("--dataset", sim_dataset, "rating file")->required();
    sim->add_option("--format", sim_format, "csv, tsv, dcolon or auto");
    sim->add_option("--lo", sim_lo, "rating domain lower bound");
    sim->add_option("--hi", sim_hi, "rating domain upper bound");
    sim->add_option("--measure", sim_measure, "similarity measure name")->required();
    sim->add_option("--axis", sim_axis, "user or item");
    sim->add_option("--cache", sim_cache, "cache directory to write into");
    sim->add_option("--export", sim_export, "also export scores as CSV");

    // nan-count
    std::string nan_dataset, nan_format = "auto", nan_axis = "user",
                nan_groups = "20-25,100-149,150-,20-", nan_measure = "pcc", nan_out;
    int nan_lo = 1, nan_hi = 5;
    std::uint32_t nan_sample = 150;
    std::uint64_t nan_seed = 42;
    auto* nan = app.add_subcommand("nan-count", "count undefined similarities per entity group");
    nan->add_option("--dataset", nan_dataset, "rating file")->required();
    nan->add_option("--format", nan_format, "csv, tsv, dcolon or auto");
    nan->add_option("--lo", nan_lo, "rating domain lower bound");
    nan->add_option("--hi", nan_hi, "rating domain upper bound");
    nan->add_option("--axis", nan_axis, "user or item");
    nan->add_option("--groups", nan_groups, "comma list of count ranges, e.g. 20-25,150-");
    nan->add_option("--sample", nan_sample, "entities sampled per group");
    nan->add_option("--seed", nan_seed, "sampling seed");
    nan->add_option("--measure", nan_measure, "similarity measure to census");
    nan->add_option("--out", nan_out, "output CSV")->required();

    // predict
    std::string pr_dataset, pr_format = "auto", pr_pairs, pr_method = "user", pr_measure = "pcc",
                pr_fallback = "mean", pr_out;
    int pr_lo = 1, pr_hi = 5;
    std::uint32_t pr_k = 10, pr_ki = 10;
    bool pr_no_clamp = false;
    auto* pr = app.add_subcommand("predict", "predict user,item pairs from a CSV");
    pr->add_option("--dataset", pr_dataset, "training rating file")->required();
    pr->add_option("--format", pr_format, "csv, tsv, dcolon or auto");
    pr->add_option("--lo", pr_lo, "rating domain lower bound");
    pr->add_option("--hi", pr_hi, "rating domain upper bound");
    pr->add_option("--pairs", pr_pairs, "CSV of user,item pairs")->required();
    pr->add_option("--method", pr_method, "user, item, hb1 or hb2");
    pr->add_option("--measure", pr_measure, "similarity source");
    pr->add_option("-K,--neighbors", pr_k, "neighborhood size");
    pr->add_option("--k-i", pr_ki, "items per intermediate rating");
    pr->add_option("--fallback", pr_fallback, "mean or skip");
    pr->add_flag("--no-clamp", pr_no_clamp, "keep raw predictions, do not clamp to the domain");
    pr->add_option("--out", pr_out, "output CSV")->required();

    // synth
    std::uint32_t sy_users = 943, sy_items = 1682;
    std::uint64_t sy_ratings = 100000, sy_seed = 1;
    std::string sy_out;
    auto* sy = app.add_subcommand("synth", "write a deterministic synthetic benchmark dataset");
    sy->add_option("--users", sy_users, "number of users");
    sy->add_option("--items", sy_items, "number of items");
    sy->add_option("--ratings", sy_ratings, "approximate rating count");
    sy->add_option("--seed", sy_seed, "generator seed");
    sy->add_option("--out", sy_out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        auto status = netcf_run_config(run_config.c_str(), run_seed,
                                       run_out.empty() ? nullptr : run_out.c_str());
        if (status != NETCF_OK) return report_failure(status);
        std::printf("run complete\n");
        return 0;
    }

    if (sim->parsed()) {
        MatrixHandle m;
        auto status = netcf_matrix_load(sim_dataset.c_str(), sim_format.c_str(), sim_lo, sim_hi, &m.m);
        if (status != NETCF_OK) return report_failure(status);
        SimilarityHandle s;
        status = netcf_similarity_compute(m.m, sim_measure.c_str(), sim_axis.c_str(), &s.s);
        if (status != NETCF_OK) return report_failure(status);
        std::uint64_t undefined = 0, hash = 0;
        netcf_similarity_undefined_pairs(s.s, &undefined);
        netcf_matrix_hash(m.m, &hash);
        if (!sim_cache.empty()) {
            char path[4096];
            std::snprintf(path, sizeof path, "%s/sim_%016" PRIx64 "_%s_%s.bin", sim_cache.c_str(),
                          hash, sim_measure.c_str(), sim_axis.c_str());
            status = netcf_similarity_save_cache(s.s, m.m, path);
            if (status != NETCF_OK) return report_failure(status);
            std::printf("cache written: %s\n", path);
        }
        if (!sim_export.empty()) {
            status = netcf_similarity_export_csv(s.s, sim_export.c_str());
            if (status != NETCF_OK) return report_failure(status);
            std::printf("csv written: %s\n", sim_export.c_str());
        }
        std::printf("measure=%s axis=%s undefined_pairs=%" PRIu64 "\n", sim_measure.c_str(),
                    sim_axis.c_str(), undefined);
        return 0;
    }

    if (nan->parsed()) {
        auto status =
            netcf_nan_count(nan_dataset.c_str(), nan_format.c_str(), nan_lo, nan_hi,
                            nan_axis.c_str(), nan_groups.c_str(), nan_sample, nan_seed,
                            nan_measure.c_str(), nan_out.c_str());
        if (status != NETCF_OK) return report_failure(status);
        std::printf("nan-count written: %s\n", nan_out.c_str());
        return 0;
    }

    if (pr->parsed()) {
        MatrixHandle m;
        auto status = netcf_matrix_load(pr_dataset.c_str(), pr_format.c_str(), pr_lo, pr_hi, &m.m);
        if (status != NETCF_OK) return report_failure(status);
        status = netcf_batch_predict(m.m, pr_method.c_str(), pr_measure.c_str(), pr_k, pr_ki,
                                     pr_fallback.c_str(), pr_no_clamp ? 0 : 1, pr_pairs.c_str(),
                                     pr_out.c_str());
        if (status != NETCF_OK) return report_failure(status);
        std::printf("predictions written: %s\n", pr_out.c_str());
        return 0;
    }

    if (sy->parsed()) {
        MatrixHandle m;
        auto status = netcf_matrix_synth(sy_users, sy_items, sy_ratings, sy_seed, &m.m);
        if (status != NETCF_OK) return report_failure(status);
        status = netcf_matrix_export_csv(m.m, sy_out.c_str());
        if (status != NETCF_OK) return report_failure(status);
        std::uint32_t nu = 0, ni = 0;
        std::uint64_t nr = 0;
        double density = 0;
        netcf_matrix_dims(m.m, &nu, &ni, &nr);
        netcf_matrix_density(m.m, &density);
        std::printf("synthetic dataset written: %s (%u users, %u items, %" PRIu64
                    " ratings, density %.2f%%)\n",
                    sy_out.c_str(), nu, ni, nr, density);
        return 0;
    }

    return 1;
}
