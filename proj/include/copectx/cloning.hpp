#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copectx/rank.hpp"

// End-to-end contextuality runs for the n-input cloning construction:
// generate inputs, attach clones, build the factored statistics, and verdict.

namespace copectx {

struct DegenerateClone : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class CloneTask { PhaseCovariant, Universal };

std::string to_string(CloneTask task);

struct InputMode {
  enum class Kind { Deterministic, Seeded };
  Kind kind = Kind::Deterministic;
  std::uint64_t seed = 0;

  static InputMode deterministic() { return {}; }
  static InputMode seeded(std::uint64_t seed) {
    return {Kind::Seeded, seed};
  }
};

struct CloneModel {
  enum class Kind { Ideal, Rotated, Custom };
  Kind kind = Kind::Rotated;
  double angle = 0.2;
  std::vector<Ket> custom;

  static CloneModel ideal() { return {Kind::Ideal, 0.0, {}}; }
  static CloneModel rotated(double angle) {
    return {Kind::Rotated, angle, {}};
  }
  static CloneModel custom_list(std::vector<Ket> clones);
  std::string describe() const;
};

// Phase-covariant: equatorial states, evenly spaced when deterministic.
// Universal: Bloch-sphere states, a low-discrepancy spiral when
// deterministic. Seeded modes draw uniformly. Pairwise distinct as rays.
std::vector<Ket> generate_inputs(CloneTask task, long long n,
                                 const InputMode& mode = {});

// One dim-4 clone per input. Rotated clones tilt the ideal clone toward the
// input's orthogonal companion by the model angle, so they stay independent
// of the ideal clone; a zero rotation or a custom clone parallel to the
// ideal one throws DegenerateClone. Ideal mode is allowed but collapses each
// input's preparation block from four to two downstream.
std::vector<Ket> clone_outputs(const std::vector<Ket>& inputs,
                               const CloneModel& model = {});

struct CloningReport {
  CloneTask task = CloneTask::PhaseCovariant;
  std::string clone_model;
  bool degenerate_model = false;
  long long n_inputs = 0;
  long long n_preparations = 0;
  int factored_rank = 0;
  bool hypothesis_ok = false;
  bool hypothesis_exhaustive = false;
  int bound_l = 0;
  long long min_preparations = 0;  // smallest count separating this rank
  Verdict verdict;
  std::string note;
  long long runtime_ms = 0;
};

// Antichain check at state-amplitude resolution. Every preparation block
// carries an exactly orthogonal partner by construction, and amplitudes in
// the four-dimensional state space resolve overlaps far below the squared
// probabilities in the COPE, so near-orthogonal input pairs at large n do
// not masquerade as shared zeros. Exhaustive over all ordered pairs up to
// cfg.exhaustive_cap preparations, randomized pair sampling above it.
FactoredAntichainResult cloning_antichain_hypothesis(
    const Fragment& frag, const FactoredAntichainConfig& cfg = {});

CloningReport verify_cloning(CloneTask task, long long n,
                             const CloneModel& model = {},
                             const InputMode& inputs = {}, double tol = -1.0,
                             double eps = 1e-10,
                             const FactoredAntichainConfig& cfg = {});

}  // namespace copectx
