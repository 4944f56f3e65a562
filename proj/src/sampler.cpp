#include "gwldp/sampler.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gwldp {

void validate_root_law(const Alphabet& alphabet, const RootLaw& mu, double tol) {
  if (static_cast<int>(mu.size()) != alphabet.size())
    throw std::invalid_argument("root law: size must match the alphabet");
  double sum = 0.0;
  for (double p : mu) {
    if (p < 0.0) throw std::invalid_argument("root law: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("root law: sums to " + std::to_string(sum));
}

namespace {

TypeId sample_root(const RootLaw& mu, RngStream& rng) {
  double u = rng.uniform();
  const int last = static_cast<int>(mu.size()) - 1;
  for (int a = 0; a < last; ++a) {
    if (u < mu[static_cast<std::size_t>(a)]) return a;
    u -= mu[static_cast<std::size_t>(a)];
  }
  return last;
}

}  // namespace

std::optional<TypedTree> sample_tree(const OffspringKernel& kernel, const RootLaw& mu,
                                     RngStream& rng, int max_vertices) {
  if (max_vertices < 1) throw std::invalid_argument("sample_tree: max_vertices must be >= 1");

  // Work items are vertices that are committed but not yet visited. Indices
  // are assigned at visit time, which makes vertex order exactly preorder.
  struct Item {
    std::int32_t parent;
    TypeId type;
  };
  std::vector<TypedTree::Vertex> vertices;
  std::vector<Item> pending{{-1, sample_root(mu, rng)}};

  while (!pending.empty()) {
    const Item item = pending.back();
    pending.pop_back();
    const int idx = static_cast<int>(vertices.size());
    vertices.push_back({item.type, item.parent, {}});
    if (item.parent >= 0)
      vertices[static_cast<std::size_t>(item.parent)].children.push_back(idx);

    const OffspringConfig c = kernel.sample(item.type, rng);
    // Committed size = created + still pending + this vertex's offspring.
    if (static_cast<int>(vertices.size() + pending.size()) + c.count() > max_vertices)
      return std::nullopt;
    for (int i = c.count() - 1; i >= 0; --i)
      pending.push_back({static_cast<std::int32_t>(idx), c.child(i)});
  }
  return TypedTree::from_vertices(std::move(vertices));
}

std::optional<SampleReport> sample_conditioned(const OffspringKernel& kernel, const RootLaw& mu,
                                               int n, RngStream& rng, std::int64_t retry_budget) {
  if (n < 1) throw std::invalid_argument("sample_conditioned: n must be >= 1");
  for (std::int64_t attempt = 1; attempt <= retry_budget; ++attempt) {
    std::optional<TypedTree> tree = sample_tree(kernel, mu, rng, n);
    if (tree && tree->size() == n) return SampleReport{std::move(*tree), attempt, 0};
  }
  return std::nullopt;
}

std::optional<SampleReport> sample_markov_indexed(const CountLaw& counts, const Matrix& transition,
                                                  const RootLaw& mu, int n, RngStream& rng,
                                                  std::int64_t retry_budget) {
  if (transition.rows != transition.cols || transition.rows < 1)
    throw std::invalid_argument("sample_markov_indexed: square transition matrix required");
  if (static_cast<int>(mu.size()) != transition.rows)
    throw std::invalid_argument("sample_markov_indexed: root law size mismatch");

  // Step 1: plain shape with |T| = n, drawn from a single-type kernel.
  const Alphabet shape_alphabet({"."});
  const OffspringKernel shape_kernel =
      OffspringKernel::factored(shape_alphabet, counts, Matrix(1, 1, 1.0));
  const RootLaw shape_mu{1.0};
  std::optional<SampleReport> shape = sample_conditioned(shape_kernel, shape_mu, n, rng, retry_budget);
  if (!shape) return std::nullopt;

  // Step 2: types down the edges, parent before child in DFS order.
  std::vector<TypedTree::Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>(n));
  std::vector<TypeId> types(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const auto& vx = shape->tree.vertex(v);
    if (v == 0) {
      types[0] = sample_root(mu, rng);
    } else {
      const TypeId parent_type = types[static_cast<std::size_t>(vx.parent)];
      double u = rng.uniform();
      TypeId child = transition.cols - 1;
      for (TypeId b = 0; b < transition.cols - 1; ++b) {
        if (u < transition.at(parent_type, b)) {
          child = b;
          break;
        }
        u -= transition.at(parent_type, b);
      }
      types[static_cast<std::size_t>(v)] = child;
    }
    vertices.push_back({types[static_cast<std::size_t>(v)], vx.parent, vx.children});
  }
  return SampleReport{TypedTree::from_vertices(std::move(vertices)), shape->attempts, 0};
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GWLDP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for_index(int total, int threads, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(threads), std::max(total, 1));
  if (workers <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= total) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::optional<SampleReport>> sample_conditioned_batch(const OffspringKernel& kernel,
                                                                  const RootLaw& mu, int n,
                                                                  int count, std::uint64_t seed,
                                                                  std::int64_t retry_budget,
                                                                  int threads) {
  std::vector<std::optional<SampleReport>> out(static_cast<std::size_t>(count));
  parallel_for_index(count, threads, [&](int i) {
    RngStream rng(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_conditioned(kernel, mu, n, rng, retry_budget);
    if (out[static_cast<std::size_t>(i)])
      out[static_cast<std::size_t>(i)]->rng_seed = seed;
  });
  return out;
}

}  // namespace gwldp
