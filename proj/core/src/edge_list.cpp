#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "genadapt/errors.hpp"
#include "genadapt/netmodel.hpp"
#include "text_util.hpp"

namespace genadapt {

std::string format_edge_list(const Network& net) {
  std::string out = "nodes " + std::to_string(net.node_count()) + "\n";
  for (const Link& l : net.links()) {
    out += "link " + std::to_string(l.id) + " " + std::to_string(l.src) + " " + std::to_string(l.dst) +
           " " + detail::shortest(l.bw_mbps) + " " + detail::shortest(l.dl_ms) + "\n";
  }
  return out;
}

Network parse_edge_list(std::string_view text) {
  std::optional<int> nodes;
  std::vector<Link> links;
  std::size_t line_no = 0;
  for (std::string_view line : detail::split_lines(text)) {
    ++line_no;
    const auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens[0] == "nodes") {
      if (nodes) throw FileFormatError("duplicate nodes header", line_no);
      if (tokens.size() != 2) throw FileFormatError("expected `nodes <n>`", line_no);
      int n = 0;
      if (!detail::parse_int(tokens[1], n) || n < 0) throw FileFormatError("bad node count", line_no);
      nodes = n;
    } else if (tokens[0] == "link") {
      if (!nodes) throw FileFormatError("link before nodes header", line_no);
      if (tokens.size() != 6) throw FileFormatError("expected `link <id> <src> <dst> <bw> <dl>`", line_no);
      Link l;
      if (!detail::parse_int(tokens[1], l.id) || !detail::parse_int(tokens[2], l.src) ||
          !detail::parse_int(tokens[3], l.dst) || !detail::parse_double(tokens[4], l.bw_mbps) ||
          !detail::parse_double(tokens[5], l.dl_ms))
        throw FileFormatError("bad number in link line", line_no);
      if (l.id != static_cast<LinkId>(links.size()))
        throw FileFormatError("link ids must be dense and in order", line_no);
      links.push_back(l);
    } else {
      throw FileFormatError("unknown record `" + std::string(tokens[0]) + "`", line_no);
    }
  }
  if (!nodes) throw FileFormatError("missing nodes header", line_no + 1);
  try {
    return Network(*nodes, std::move(links));
  } catch (const StructuralError& e) {
    throw FileFormatError(e.what(), line_no);
  }
}

Network read_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(detail::read_file(path));
}

void write_edge_list(const Network& net, const std::filesystem::path& path) {
  detail::write_file(path, format_edge_list(net));
}

}  // namespace genadapt
