#ifndef NETCF_MEASURES_HPP
#define NETCF_MEASURES_HPP

#include <optional>
#include <string>
#include <vector>

#include "network.hpp"
#include "similarity.hpp"

namespace netcf {

/// Knobs shared by the measure registry.
struct MeasureOptions {
    PccCentering pcc_centering = PccCentering::corated;
    /// Similarity the item-item network is built from (pcc or adjcos).
    std::string item_network_measure = "pcc";
    /// Katz damping; empty selects 0.85 / lambda_1.
    std::optional<double> katz_beta;
};

/// Names accepted by compute_measure, in canonical (report/plot) order.
const std::vector<std::string>& measure_registry();
bool is_structural_measure(const std::string& name);
std::string registry_string();

/// Computes any registered measure on the given axis. Structural measures
/// (net-cn, net-jaccard, net-katz) build the PCC-weighted network first
/// (adjusted cosine optionally for items) and wrap the structural scores as
/// a SimilarityMatrix. Throws DomainError for unknown names or unsupported
/// axis combinations.
SimilarityMatrix compute_measure(const RatingMatrix& m, const std::string& name, Axis axis,
                                 const MeasureOptions& opts = {});

/// The weighted network a structural measure would use on this axis.
Network build_axis_network(const RatingMatrix& m, Axis axis, const MeasureOptions& opts = {});

} // namespace netcf

#endif
