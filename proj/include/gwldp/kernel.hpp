#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "gwldp/alphabet.hpp"
#include "gwldp/config.hpp"
#include "gwldp/count_law.hpp"
#include "gwldp/linalg.hpp"
#include "gwldp/tilt_function.hpp"

namespace gwldp {

/// Per-type explicit offspring law: atoms (c, Q{c|a}) with positive weight.
struct ExplicitLaw {
  std::vector<std::pair<OffspringConfig, double>> atoms;
};

/// Mean offspring matrix A(a,b): expected type-a children of a type-b parent.
struct MeanMatrix {
  Alphabet alphabet;
  Matrix entries;  // entries.at(a, b), column b = parent type

  double at(TypeId a, TypeId b) const { return entries.at(a, b); }
};

/**
 * Recurrent/transient partition of the type set by reachability on the
 * support of A, the Perron-Frobenius data of the recurrent block, and the
 * observed bound on transient offspring (no cap is imposed on it).
 */
struct IrreducibilityReport {
  std::vector<TypeId> recurrent;
  std::vector<TypeId> transient;
  bool weakly_irreducible = false;
  double pf_eigenvalue = 0.0;  // rho(A) on the recurrent block; 0 without a valid partition
  bool critical = false;       // |rho(A) - 1| <= 1e-8
  std::vector<double> right_eigenvector;  // full length, zero off the recurrent set
  std::vector<double> left_eigenvector;
  // max over the kernel support of sum_{a transient} m(a,c); nullopt when
  // unbounded or when only the matrix was available.
  std::optional<int> transient_offspring_bound;
};

/**
 * Offspring transition kernel Q from X to X*. Three representations:
 *
 *   explicit  per-type finite lists of (configuration, probability)
 *   factored  Q{(n,a_1..a_n)|b} = p(n) prod_i T(b -> a_i)
 *   tilted    Q{c|a} e^{g(a,c) - U_g(a)} over a base kernel
 *
 * All representations answer pointwise probabilities exactly; the factored
 * and tilted forms stay exact for unbounded count laws (no truncation is
 * involved in prob/mass/mean computations).
 */
class OffspringKernel {
 public:
  static OffspringKernel explicit_kernel(Alphabet alphabet, std::vector<ExplicitLaw> laws);
  static OffspringKernel factored(Alphabet alphabet, CountLaw counts, Matrix transition);
  static OffspringKernel tilted(std::shared_ptr<const OffspringKernel> base, TiltFunction g,
                                std::vector<double> log_normalizers);

  const Alphabet& alphabet() const { return alphabet_; }

  bool is_explicit() const { return std::holds_alternative<Explicit>(form_); }
  bool is_factored() const { return std::holds_alternative<Factored>(form_); }
  bool is_tilted() const { return std::holds_alternative<Tilted>(form_); }

  // Q{c|a}; a is the parent type.
  double prob(TypeId a, const OffspringConfig& c) const;

  // Largest offspring count on the support; nullopt for unbounded laws.
  std::optional<int> support_bound() const;

  // Q{X_k* | a}, the mass of configurations with at most k children.
  double mass_upto(TypeId a, int k) const;

  // Factored accessors (throw for other forms).
  const CountLaw& count_law() const;
  const Matrix& transition() const;

  // Tilted accessors.
  const OffspringKernel& tilt_base() const;
  const TiltFunction& tilt_function() const;
  const std::vector<double>& tilt_log_normalizers() const;

  OffspringConfig sample(TypeId a, RngStream& rng) const;

  // Visits every support atom with count <= max_count as (c, Q{c|a}).
  void for_each_config(TypeId a, int max_count,
                       const std::function<void(const OffspringConfig&, double)>& fn) const;

  const std::vector<std::pair<OffspringConfig, double>>& explicit_atoms(TypeId a) const;

 private:
  struct Explicit {
    std::vector<ExplicitLaw> laws;  // indexed by parent type
    int max_count = 0;
  };
  struct Factored {
    CountLaw counts;
    Matrix transition;  // row b = parent type, T(b -> a)
  };
  struct Tilted {
    std::shared_ptr<const OffspringKernel> base;
    TiltFunction g;
    std::vector<double> u;      // U_g per type
    std::vector<double> g_max;  // per-type rejection bound
  };

  OffspringKernel(Alphabet a, std::variant<Explicit, Factored, Tilted> f)
      : alphabet_(std::move(a)), form_(std::move(f)) {}

  Alphabet alphabet_;
  std::variant<Explicit, Factored, Tilted> form_;
};

MeanMatrix mean_matrix(const OffspringKernel& kernel);

// Partition decided by graph reachability on the support of A, never by
// summing matrix powers; rho(A) by power iteration on the recurrent block.
IrreducibilityReport classify(const MeanMatrix& a);

// classify() plus the kernel-level transient offspring bound.
IrreducibilityReport analyze_kernel(const OffspringKernel& kernel);

// Conditional kernel Q_k{c|a} = Q{c|a} / Q{X_k*|a} on X_k*.
OffspringKernel truncate_kernel(const OffspringKernel& kernel, int k);

OffspringKernel factored_kernel(const CountLaw& counts, const Matrix& transition,
                                const Alphabet& alphabet);

// Per-type total variation between two kernels' offspring laws.
double kernel_tv_per_type(const OffspringKernel& q1, const OffspringKernel& q2, TypeId a);

}  // namespace gwldp
