#include "pottsforge/text_format.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pottsforge {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, comment-stripped line split into tokens; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      tokens.clear();
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("line " + std::to_string(line_no_) + ": " + what);
  }

  int to_int(const std::string& tok) const {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      fail("expected integer, got '" + tok + "'");
    }
    if (used != tok.size()) fail("expected integer, got '" + tok + "'");
    return v;
  }

  BigRational to_rational(const std::string& tok) const {
    try {
      return parse_rational(tok);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

WeightedGraph read_graph(LineReader& r, const std::vector<std::string>& header) {
  if (header.size() != 3) r.fail("expected 'graph <n> <m>'");
  int n = r.to_int(header[1]);
  int m = r.to_int(header[2]);
  std::vector<Edge> edges;
  std::vector<BigRational> weights;
  std::vector<std::string> tok;
  for (int i = 0; i < m; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of input: expected " + std::to_string(m) + " edges");
    if (tok.size() != 3) r.fail("expected 'u v gamma'");
    edges.push_back({r.to_int(tok[0]), r.to_int(tok[1])});
    weights.push_back(r.to_rational(tok[2]));
  }
  return WeightedGraph(n, std::move(edges), std::move(weights));
}

WeightedHypergraph read_hypergraph(LineReader& r, const std::vector<std::string>& header) {
  if (header.size() != 3) r.fail("expected 'hypergraph <n> <m>'");
  int n = r.to_int(header[1]);
  int m = r.to_int(header[2]);
  std::vector<std::vector<int>> hyperedges;
  std::vector<BigRational> weights;
  std::vector<std::string> tok;
  for (int i = 0; i < m; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of input: expected " + std::to_string(m) + " hyperedges");
    int k = r.to_int(tok[0]);
    if (k < 1 || tok.size() != static_cast<std::size_t>(k) + 2) r.fail("expected 'k v1 ... vk gamma'");
    std::vector<int> f;
    for (int j = 0; j < k; ++j) f.push_back(r.to_int(tok[1 + j]));
    hyperedges.push_back(std::move(f));
    weights.push_back(r.to_rational(tok.back()));
  }
  return WeightedHypergraph(n, std::move(hyperedges), std::move(weights));
}

BipartiteGraph read_bipartite(LineReader& r, const std::vector<std::string>& header) {
  if (header.size() != 4) r.fail("expected 'bipartite <nL> <nR> <m>'");
  int left = r.to_int(header[1]);
  int right = r.to_int(header[2]);
  int m = r.to_int(header[3]);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> tok;
  for (int i = 0; i < m; ++i) {
    if (!r.next(tok)) r.fail("unexpected end of input: expected " + std::to_string(m) + " edges");
    if (tok.size() != 2) r.fail("expected 'u v'");
    edges.emplace_back(r.to_int(tok[0]), r.to_int(tok[1]));
  }
  return BipartiteGraph(left, right, std::move(edges));
}

}  // namespace

Instance parse_instance(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> header;
  if (!r.next(header)) throw std::invalid_argument("empty instance");
  Instance result;
  if (header[0] == "graph") {
    result = read_graph(r, header);
  } else if (header[0] == "hypergraph") {
    result = read_hypergraph(r, header);
  } else if (header[0] == "bipartite") {
    result = read_bipartite(r, header);
  } else {
    r.fail("unknown instance kind '" + header[0] + "'");
  }
  std::vector<std::string> extra;
  if (r.next(extra)) r.fail("trailing content after instance");
  return result;
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_instance(in);
}

std::string serialize(const WeightedGraph& g) {
  std::ostringstream out;
  out << "graph " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (int i = 0; i < g.edge_count(); ++i) {
    out << g.edge(i).u << ' ' << g.edge(i).v << ' ' << to_fraction_string(g.weight(i)) << '\n';
  }
  return out.str();
}

std::string serialize(const WeightedHypergraph& h) {
  std::ostringstream out;
  out << "hypergraph " << h.vertex_count() << ' ' << h.edge_count() << '\n';
  for (int i = 0; i < h.edge_count(); ++i) {
    const auto& f = h.hyperedge(i);
    out << f.size();
    for (int v : f) out << ' ' << v;
    out << ' ' << to_fraction_string(h.weight(i)) << '\n';
  }
  return out.str();
}

std::string serialize(const BipartiteGraph& b) {
  std::ostringstream out;
  out << "bipartite " << b.left_count() << ' ' << b.right_count() << ' ' << b.edge_count() << '\n';
  for (const auto& [u, v] : b.edges()) out << u << ' ' << v << '\n';
  return out.str();
}

std::string serialize(const Instance& instance) {
  return std::visit([](const auto& x) { return serialize(x); }, instance);
}

void write_instance_file(const std::string& path, const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(instance);
}

}  // namespace pottsforge
