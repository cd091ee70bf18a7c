#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poscone/operator.hpp"

namespace poscone {

/// Support pattern of a truncated positive operator: arc l -> k present
/// iff <e_k*, T e_l> > tol_abs.
struct SupportDigraph {
  std::size_t dim = 0;
  std::vector<std::vector<std::size_t>> successors;  // successors[l] = { k : arc l -> k }

  std::vector<std::pair<std::size_t, std::size_t>> arcs() const;
};

/// Outcome of the invariant-ideal criterion at a truncation. The verdict
/// is about this finite section only; a reducible truncation says nothing
/// about the infinite operator.
struct IdealReport {
  std::size_t truncation_dim = 0;
  bool irreducible = false;
  std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> witness_powers;
  std::optional<std::vector<std::size_t>> invariant_ideal_support;
};

SupportDigraph support_digraph(const TruncatedPositiveOperator& T);

std::vector<std::vector<std::size_t>> strongly_connected_components(const SupportDigraph& g);

/// SCC-only irreducibility check (no witnesses); cheap enough for ensembles.
bool is_irreducible(const SupportDigraph& g);

/// Full criterion: T has no nontrivial closed invariant ideal at this
/// truncation iff every i reaches every j != i in the support digraph.
/// witness_powers[(i,j)] is the smallest n with <e_j*, T^n e_i> > 0; on
/// failure the reachable set of the failing i spans an invariant ideal.
IdealReport rt_criterion(const TruncatedPositiveOperator& T);

/// Necessary condition for a positive isometry: the columns T e_i have
/// mutually disjoint supports (no row exceeds tol_abs in two columns).
bool has_disjoint_column_supports(const TruncatedPositiveOperator& T);

/// DOT rendering of the digraph, optionally highlighting an ideal's support.
std::string to_dot(const SupportDigraph& g,
                   const std::vector<std::size_t>* highlight = nullptr);

}  // namespace poscone
