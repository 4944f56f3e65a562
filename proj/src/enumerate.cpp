#include "gwldp/enumerate.hpp"

#include <deque>
#include <map>

namespace gwldp {

namespace {

struct Fragment {
  TypeId type;
  std::vector<const Fragment*> children;
  double prob;  // product of offspring probabilities over the subtree
};

class Enumerator {
 public:
  Enumerator(const OffspringKernel& kernel, std::int64_t budget)
      : kernel_(kernel), budget_(budget) {}

  const std::vector<const Fragment*>& fragments(TypeId a, int size) {
    const auto key = std::make_pair(a, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto& out = memo_[key];

    kernel_.for_each_config(a, size - 1, [&](const OffspringConfig& c, double q) {
      if (q <= 0.0) return;
      const int k = c.count();
      if (k == 0) {
        if (size == 1) out.push_back(make_fragment(a, {}, q));
        return;
      }
      if (size - 1 < k) return;  // every subtree needs at least one vertex
      std::vector<const Fragment*> chosen(static_cast<std::size_t>(k));
      compose(a, c, q, 0, size - 1, chosen, out);
    });
    return memo_[key];
  }

  std::int64_t used() const { return used_; }

 private:
  // Distributes `remaining` vertices over children i.. of configuration c,
  // recursing over each child's fragment list.
  void compose(TypeId root_type, const OffspringConfig& c, double q, int i, int remaining,
               std::vector<const Fragment*>& chosen, std::vector<const Fragment*>& out) {
    const int k = c.count();
    if (i == k) {
      if (remaining != 0) return;
      out.push_back(make_fragment(root_type, chosen, q * product(chosen)));
      return;
    }
    const int tail = k - i - 1;  // children after this one, each needs >= 1 vertex
    for (int s = 1; s + tail <= remaining; ++s) {
      // Fragment list must be materialized before iterating: recursion below
      // may grow the memo map but not an already-built entry.
      const auto& options = fragments(c.child(i), s);
      for (const Fragment* f : options) {
        chosen[static_cast<std::size_t>(i)] = f;
        compose(root_type, c, q, i + 1, remaining - s, chosen, out);
      }
    }
  }

  static double product(const std::vector<const Fragment*>& chosen) {
    double p = 1.0;
    for (const Fragment* f : chosen) p *= f->prob;
    return p;
  }

  const Fragment* make_fragment(TypeId type, std::vector<const Fragment*> children, double prob) {
    if (++used_ > budget_)
      throw BudgetExceeded("enumerate: budget of " + std::to_string(budget_) +
                           " tree-type pairs exceeded");
    arena_.push_back(Fragment{type, std::move(children), prob});
    return &arena_.back();
  }

  const OffspringKernel& kernel_;
  std::int64_t budget_;
  std::int64_t used_ = 0;
  std::deque<Fragment> arena_;
  std::map<std::pair<TypeId, int>, std::vector<const Fragment*>> memo_;
};

TypedTree assemble(const Fragment* root) {
  std::vector<TypedTree::Vertex> vertices;
  struct Item {
    const Fragment* frag;
    std::int32_t parent;
  };
  std::vector<Item> stack{{root, -1}};
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const int idx = static_cast<int>(vertices.size());
    vertices.push_back({item.frag->type, item.parent, {}});
    if (item.parent >= 0)
      vertices[static_cast<std::size_t>(item.parent)].children.push_back(idx);
    for (auto it = item.frag->children.rbegin(); it != item.frag->children.rend(); ++it)
      stack.push_back({*it, static_cast<std::int32_t>(idx)});
  }
  return TypedTree::from_vertices(std::move(vertices));
}

}  // namespace

std::vector<EnumeratedTree> enumerate_trees(const OffspringKernel& kernel, const RootLaw& mu,
                                            int n, std::int64_t budget) {
  if (n < 1) throw std::invalid_argument("enumerate: n must be >= 1");
  validate_root_law(kernel.alphabet(), mu);

  Enumerator enumerator(kernel, budget);
  std::vector<EnumeratedTree> out;
  for (TypeId a = 0; a < kernel.alphabet().size(); ++a) {
    const double mu_a = mu[static_cast<std::size_t>(a)];
    if (mu_a <= 0.0) continue;
    for (const Fragment* f : enumerator.fragments(a, n))
      out.push_back({assemble(f), mu_a * f->prob});
  }
  return out;
}

double exact_size_probability(const OffspringKernel& kernel, const RootLaw& mu, int n,
                              std::int64_t budget) {
  if (n < 1) throw std::invalid_argument("exact_size_probability: n must be >= 1");
  validate_root_law(kernel.alphabet(), mu);
  const int s_count = kernel.alphabet().size();

  // f[a][s] = P{subtree rooted at a type-a vertex has exactly s vertices}.
  std::vector<std::vector<double>> f(static_cast<std::size_t>(s_count),
                                     std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
  std::int64_t work = 0;
  for (int s = 1; s <= n; ++s) {
    for (TypeId a = 0; a < s_count; ++a) {
      double total = 0.0;
      kernel.for_each_config(a, s - 1, [&](const OffspringConfig& c, double q) {
        if (q <= 0.0) return;
        const int k = c.count();
        if (k == 0) {
          if (s == 1) total += q;
          return;
        }
        if (s - 1 < k) return;
        // Convolution over the ordered children of this configuration.
        std::vector<double> conv(static_cast<std::size_t>(s), 0.0);
        conv[0] = 1.0;
        for (int i = 0; i < k; ++i) {
          std::vector<double> next(static_cast<std::size_t>(s), 0.0);
          for (int m = 0; m < s; ++m) {
            if (conv[static_cast<std::size_t>(m)] == 0.0) continue;
            for (int si = 1; m + si < s; ++si)
              next[static_cast<std::size_t>(m + si)] +=
                  conv[static_cast<std::size_t>(m)] *
                  f[static_cast<std::size_t>(c.child(i))][static_cast<std::size_t>(si)];
          }
          conv.swap(next);
          work += s;
        }
        total += q * conv[static_cast<std::size_t>(s - 1)];
        if (work > budget)
          throw BudgetExceeded("exact_size_probability: budget exceeded");
      });
      f[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)] = total;
    }
  }

  double p = 0.0;
  for (TypeId a = 0; a < s_count; ++a)
    p += mu[static_cast<std::size_t>(a)] * f[static_cast<std::size_t>(a)][static_cast<std::size_t>(n)];
  return p;
}

}  // namespace gwldp
