// Copyright (c) 2026 The tfa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TFA_ERRORS_HPP
#define TFA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tfa {

/// Bad user-supplied configuration: unknown layer, class, mode, flag.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tensor/image shape disagreement between operands.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// NaN/Inf encountered where finite values are required.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (empty dataset, no detections, ...).
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment protocol violation (e.g. held-out set overlaps the training set).
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adapter does not implement the requested capability.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Toy detector failed to reach its quality gate.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Attack could not run (e.g. dual attention identically zero).
struct AttackAbortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File format / filesystem trouble.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tfa

#endif  // TFA_ERRORS_HPP
