#include "gwldp/tree.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace gwldp {

TypedTree TypedTree::from_vertices(std::vector<Vertex> vertices) {
  TypedTree tree(std::move(vertices));
  tree.validate();
  return tree;
}

TypedTree TypedTree::leaf(TypeId type) {
  return TypedTree({Vertex{type, -1, {}}});
}

OffspringConfig TypedTree::config(int v) const {
  const Vertex& vx = vertices_[static_cast<std::size_t>(v)];
  std::vector<TypeId> children;
  children.reserve(vx.children.size());
  for (std::int32_t c : vx.children) children.push_back(vertices_[static_cast<std::size_t>(c)].type);
  return OffspringConfig(std::move(children));
}

void TypedTree::validate() const {
  const int n = size();
  if (n == 0) throw std::logic_error("tree: empty");
  if (vertices_[0].parent != -1) throw std::logic_error("tree: vertex 0 must be the root");

  int edges = 0;
  for (int v = 0; v < n; ++v) {
    const Vertex& vx = vertices_[static_cast<std::size_t>(v)];
    if (v > 0) {
      if (vx.parent < 0 || vx.parent >= n) throw std::logic_error("tree: parent index out of range");
      if (vx.parent >= v) throw std::logic_error("tree: parent must precede child in DFS order");
      ++edges;
    }
    for (std::int32_t c : vx.children) {
      if (c <= v || c >= n) throw std::logic_error("tree: child index out of DFS range");
      if (vertices_[static_cast<std::size_t>(c)].parent != v)
        throw std::logic_error("tree: child/parent mismatch");
    }
  }
  if (edges != n - 1) throw std::logic_error("tree: edge count must be size - 1");

  // Replaying a DFS over the stored children lists must reproduce the vertex
  // order exactly; this pins both planarity and contiguity of subtrees.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = vertices_[static_cast<std::size_t>(v)].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(order.size()) != n) throw std::logic_error("tree: disconnected vertices");
  for (int v = 0; v < n; ++v) {
    if (order[static_cast<std::size_t>(v)] != v)
      throw std::logic_error("tree: vertices are not in DFS order");
  }
}

std::string TypedTree::serialize(const Alphabet& alphabet) const {
  std::string out;
  for (int v = 0; v < size(); ++v) {
    const Vertex& vx = vertices_[static_cast<std::size_t>(v)];
    out += std::to_string(v);
    out += ',';
    out += std::to_string(vx.parent);
    out += ',';
    out += alphabet.symbol(vx.type);
    out += ',';
    out += std::to_string(vx.children.size());
    out += '\n';
  }
  return out;
}

TypedTree TypedTree::parse(const Alphabet& alphabet, std::string_view text) {
  std::vector<Vertex> vertices;
  std::vector<int> declared_counts;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;

    std::array<std::string_view, 4> fields;
    std::size_t field_start = 0;
    for (int f = 0; f < 4; ++f) {
      const std::size_t comma = line.find(',', field_start);
      if (f < 3 && comma == std::string_view::npos)
        throw std::invalid_argument("tree parse: expected 4 comma-separated fields: " +
                                    std::string(line));
      fields[static_cast<std::size_t>(f)] =
          line.substr(field_start, (f == 3 ? line.size() : comma) - field_start);
      field_start = comma + 1;
    }

    const auto to_int = [&](std::string_view s) {
      int value = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("tree parse: bad integer '" + std::string(s) + "'");
      return value;
    };

    const int index = to_int(fields[0]);
    if (index != static_cast<int>(vertices.size()))
      throw std::invalid_argument("tree parse: non-sequential vertex index");
    Vertex vx;
    vx.parent = to_int(fields[1]);
    vx.type = alphabet.index_of(fields[2]);
    declared_counts.push_back(to_int(fields[3]));
    if (vx.parent >= 0) {
      if (vx.parent >= index) throw std::invalid_argument("tree parse: parent after child");
      vertices[static_cast<std::size_t>(vx.parent)].children.push_back(index);
    }
    vertices.push_back(std::move(vx));
  }
  if (vertices.empty()) throw std::invalid_argument("tree parse: no vertices");
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (static_cast<int>(vertices[v].children.size()) != declared_counts[v])
      throw std::invalid_argument("tree parse: child_count mismatch at vertex " + std::to_string(v));
  }
  return from_vertices(std::move(vertices));
}

bool TypedTree::operator==(const TypedTree& other) const {
  if (size() != other.size()) return false;
  for (int v = 0; v < size(); ++v) {
    const Vertex& x = vertices_[static_cast<std::size_t>(v)];
    const Vertex& y = other.vertices_[static_cast<std::size_t>(v)];
    if (x.type != y.type || x.parent != y.parent || x.children != y.children) return false;
  }
  return true;
}

}  // namespace gwldp
