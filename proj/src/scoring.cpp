#include "nlof/scoring.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nlof/error.hpp"
#include "nlof/reference.hpp"
#include "parallel.hpp"
#include "text_format.hpp"

namespace nlof {
namespace {

LinkScore score_link(const LinkFlows& lf, const FofMap& fof, double threshold) {
  LinkScore s;
  s.link = lf.link;
  s.total_flows = lf.flow_ids.size();
  for (const auto& id : lf.flow_ids) {
    auto it = fof.find(id);
    if (it == fof.end())
      throw IntegrityError("flow '" + id + "' on link " + lf.link.name() + " has no FOF");
    if (it->second > threshold) ++s.outlier_flows;
  }
  if (s.total_flows == 0) {
    s.no_data = true;
    s.nlof = 0.0;
  } else {
    s.nlof = static_cast<double>(s.outlier_flows) / static_cast<double>(s.total_flows);
  }
  return s;
}

std::vector<LinkScore> nlof_all(std::span<const LinkFlows> link_flows, const FofMap& fof,
                                double threshold, detail::Exec exec) {
  std::vector<LinkScore> out(link_flows.size());
  detail::for_each_index(link_flows.size(), exec, [&](std::size_t i) {
    out[i] = score_link(link_flows[i], fof, threshold);
  });
  return out;
}

bool parse_bool(std::string_view s) {
  s = detail::trim(s);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("expected true or false, got '" + std::string(s) + "'", 0);
}

} // namespace

std::vector<LinkScore> compute_nlof(std::span<const LinkFlows> link_flows, const FofMap& fof,
                                    double threshold) {
  return nlof_all(link_flows, fof, threshold, detail::Exec::parallel);
}

std::vector<LinkScore> rank_links(std::vector<LinkScore> scores) {
  std::sort(scores.begin(), scores.end(), [](const LinkScore& x, const LinkScore& y) {
    if (x.no_data != y.no_data) return !x.no_data;
    if (x.nlof != y.nlof) return x.nlof > y.nlof;
    if (x.total_flows != y.total_flows) return x.total_flows > y.total_flows;
    return x.link < y.link;
  });
  return scores;
}

void write_report(std::ostream& out, std::span<const LinkScore> ranked, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : ranked)
      rows.push_back({{"link_a", s.link.a},
                      {"link_b", s.link.b},
                      {"nlof", s.nlof},
                      {"outlier_flows", s.outlier_flows},
                      {"total_flows", s.total_flows},
                      {"no_data", s.no_data}});
    out << rows.dump(2) << '\n';
    return;
  }
  out << "link_a,link_b,nlof,outlier_flows,total_flows,no_data\n";
  for (const auto& s : ranked)
    out << s.link.a << ',' << s.link.b << ',' << detail::format_double(s.nlof) << ','
        << s.outlier_flows << ',' << s.total_flows << ',' << (s.no_data ? "true" : "false")
        << '\n';
}

std::vector<LinkScore> read_report(std::istream& in, ReportFormat format) {
  std::vector<LinkScore> rows;
  if (format == ReportFormat::json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      for (const auto& r : doc) {
        LinkScore s;
        s.link = LinkKey(r.at("link_a").get<std::string>(), r.at("link_b").get<std::string>());
        s.nlof = r.at("nlof").get<double>();
        s.outlier_flows = r.at("outlier_flows").get<std::size_t>();
        s.total_flows = r.at("total_flows").get<std::size_t>();
        s.no_data = r.at("no_data").get<bool>();
        rows.push_back(std::move(s));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid report JSON: ") + e.what(), 1);
    }
    return rows;
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (line.rfind("link_a,", 0) == 0) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      auto pos = line.find(',', start);
      f.emplace_back(detail::trim(std::string_view(line).substr(start, pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != 6) throw ParseError("expected 6 report columns", line_no);
    LinkScore s;
    s.link = LinkKey(f[0], f[1]);
    auto nlof = detail::parse_double(f[2]);
    auto outliers = detail::parse_u64(f[3]);
    auto total = detail::parse_u64(f[4]);
    if (!nlof || !outliers || !total) throw ParseError("non-numeric report field", line_no);
    s.nlof = *nlof;
    s.outlier_flows = *outliers;
    s.total_flows = *total;
    try {
      s.no_data = parse_bool(f[5]);
    } catch (const ParseError&) {
      throw ParseError("bad no_data flag", line_no);
    }
    rows.push_back(std::move(s));
  }
  return rows;
}

namespace reference {

std::vector<LinkScore> compute_nlof(std::span<const LinkFlows> link_flows, const FofMap& fof,
                                    double threshold) {
  return nlof_all(link_flows, fof, threshold, detail::Exec::serial);
}

} // namespace reference
} // namespace nlof
