#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gwldp/alphabet.hpp"
#include "gwldp/config.hpp"

namespace gwldp {

/**
 * Finite rooted planar tree with a type per vertex. Vertices are stored in
 * depth-first (preorder) order, which is the canonical serialization order;
 * the children of each vertex are ordered left to right, so the offspring
 * configuration C(v) is reconstructible for every vertex.
 *
 * Line format (one vertex per line, DFS order, root parent = -1):
 *
 *   index,parent,type,child_count
 */
class TypedTree {
 public:
  struct Vertex {
    TypeId type;
    std::int32_t parent;  // -1 for the root
    std::vector<std::int32_t> children;
  };

  static TypedTree from_vertices(std::vector<Vertex> vertices);

  // Single root vertex.
  static TypedTree leaf(TypeId type);

  int size() const { return static_cast<int>(vertices_.size()); }
  const Vertex& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  TypeId type(int v) const { return vertices_[static_cast<std::size_t>(v)].type; }
  int child_count(int v) const {
    return static_cast<int>(vertices_[static_cast<std::size_t>(v)].children.size());
  }

  // C(v) = (N(v), X_1(v), ..., X_{N(v)}(v)).
  OffspringConfig config(int v) const;

  // Throws std::logic_error when any structural invariant fails.
  void validate() const;

  std::string serialize(const Alphabet& alphabet) const;
  static TypedTree parse(const Alphabet& alphabet, std::string_view text);

  bool operator==(const TypedTree& other) const;

 private:
  explicit TypedTree(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {}
  std::vector<Vertex> vertices_;
};

}  // namespace gwldp
