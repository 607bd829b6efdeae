#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlof/topology.hpp"

namespace nlof {

struct LinkScore {
  LinkKey link;
  std::size_t total_flows = 0;
  std::size_t outlier_flows = 0;
  double nlof = 0.0;
  /// No flow traverses the link; nlof is 0 by convention.
  bool no_data = false;

  friend bool operator==(const LinkScore&, const LinkScore&) = default;
};

using FofMap = std::unordered_map<std::string, double>;

/// Outliers are flows with fof > threshold (strict). Throws IntegrityError
/// when a listed flow has no FOF. Output order follows `link_flows`.
std::vector<LinkScore> compute_nlof(std::span<const LinkFlows> link_flows,
                                    const FofMap& fof, double threshold);

/// Descending nlof, then descending total_flows, then link name; links
/// without data go last.
std::vector<LinkScore> rank_links(std::vector<LinkScore> scores);

enum class ReportFormat { csv, json };

void write_report(std::ostream& out, std::span<const LinkScore> ranked,
                  ReportFormat format);

/// Reads a report written by write_report back (used by score-eval).
std::vector<LinkScore> read_report(std::istream& in, ReportFormat format);

} // namespace nlof
