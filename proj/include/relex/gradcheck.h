#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relex/params.h"

namespace relex {

// Element-wise relative error with a floor so that near-zero gradients are
// compared absolutely: |a - n| / max(|a|, |n|, floor).
double rel_err(double a, double n, double floor = 1e-2);

struct FdReport {
  std::string name;        // check name
  double max_rel = 0.0;    // worst element over all checked parameters
  std::string worst;       // parameter holding the worst element
  long checked = 0;        // number of elements compared
  double seconds = 0.0;
  bool ok(double tol) const { return checked > 0 && max_rel <= tol; }
};

// Compares Parameter::grad (which the caller must have filled with one
// backward pass) against central finite differences of loss_forward, which
// must rebuild the forward pass from current parameter values.
FdReport fd_compare(ParamStore& store, const std::function<double()>& loss_forward,
                    double h = 1e-5, unsigned groups = kAllGroups,
                    double floor = 1e-2);

// The named finite-difference suite behind `relex gradcheck` and the
// acceptance run: sequence LSTM step, bidirectional sequence layer, entity
// head, bottom-up and top-down tree LSTM on a 7-node two-type structure,
// relation head with the pair feature, and the full joint loss.
std::vector<FdReport> gradcheck_suite(unsigned seed, bool large_dims = false);

}  // namespace relex
