#include "measures.hpp"

#include "errors.hpp"

namespace netcf {

const std::vector<std::string>& measure_registry() {
    static const std::vector<std::string> names = {
        "pcc",  "cosine", "adjcos",     "cpcc",     "jaccard-corated",
        "pip",  "nhsm",   "net-cn",     "net-jaccard", "net-katz"};
    return names;
}

bool is_structural_measure(const std::string& name) {
    return name == "net-cn" || name == "net-jaccard" || name == "net-katz";
}

std::string registry_string() {
    std::string s;
    for (const auto& n : measure_registry()) {
        if (!s.empty()) s += ", ";
        s += n;
    }
    return s;
}

Network build_axis_network(const RatingMatrix& m, Axis axis, const MeasureOptions& opts) {
    if (axis == Axis::item && opts.item_network_measure == "adjcos")
        return Network::from_similarity(adjusted_cosine(m, Axis::item));
    if (axis == Axis::item && opts.item_network_measure != "pcc")
        throw DomainError("item network measure must be pcc or adjcos, got '" +
                          opts.item_network_measure + "'");
    return Network::from_similarity(pcc(m, axis, opts.pcc_centering));
}

SimilarityMatrix compute_measure(const RatingMatrix& m, const std::string& name, Axis axis,
                                 const MeasureOptions& opts) {
    if (name == "pcc") return pcc(m, axis, opts.pcc_centering);
    if (name == "cosine") return cosine(m, axis);
    if (name == "adjcos") return adjusted_cosine(m, axis);
    if (name == "cpcc") return cpcc(m, axis);
    if (name == "jaccard-corated") return jaccard_corated(m, axis);
    if (name == "pip") return pip(m, axis);
    if (name == "nhsm") return nhsm(m, axis);

    if (is_structural_measure(name)) {
        Network g = build_axis_network(m, axis, opts);
        std::uint64_t net_hash = g.content_hash();
        if (name == "net-cn") return common_neighbors(g).to_similarity(name, net_hash);
        if (name == "net-jaccard") return jaccard_network(g).to_similarity(name, net_hash);
        return katz(g, opts.katz_beta).to_similarity(name, net_hash);
    }
    throw DomainError("unknown measure '" + name + "'; available: " + registry_string());
}

} // namespace netcf
