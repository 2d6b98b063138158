#ifndef GCAT_CHECK_HPP
#define GCAT_CHECK_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gcat {

// Base error for precondition violations (mismatched parents, malformed
// input, out-of-range arguments).
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A partition or map is incompatible with the algebraic structure itself
// (composition not well defined, subgroupoid not closed, sizes disagree).
class structural_error : public error {
 public:
  using error::error;
};

// The structure is fine but a quantitative criterion fails (weight
// pushforwards disagree, invariance broken).  The message names a witness.
class criterion_error : public error {
 public:
  using error::error;
};

// Outcome of one named verification.  `witness` is empty on pass and
// otherwise describes the failing datum (an arrow, a pair, a grid point).
struct CheckResult {
  std::string name;
  bool pass = true;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string witness;
};

// An ordered bundle of CheckResults with helpers for building reports.
struct CheckList {
  std::vector<CheckResult> results;

  void add(CheckResult r) { results.push_back(std::move(r)); }

  // Records a pass/fail with an error magnitude measured against `tol`.
  void add(const std::string& name, double max_error, double tol,
           const std::string& witness = "") {
    CheckResult r;
    r.name = name;
    r.max_error = max_error;
    r.tolerance = tol;
    r.pass = max_error <= tol;
    if (!r.pass) r.witness = witness;
    results.push_back(std::move(r));
  }

  // Records a yes/no structural check.
  void add_flag(const std::string& name, bool pass,
                const std::string& witness = "") {
    CheckResult r;
    r.name = name;
    r.pass = pass;
    if (!pass) r.witness = witness;
    results.push_back(std::move(r));
  }

  bool all_pass() const {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.pass; });
  }

  const CheckResult* first_failure() const {
    for (const auto& r : results)
      if (!r.pass) return &r;
    return nullptr;
  }

  // Appends another list's results, optionally prefixing their names.
  void append(const CheckList& other, const std::string& prefix = "") {
    for (const auto& r : other.results) {
      CheckResult c = r;
      if (!prefix.empty()) c.name = prefix + c.name;
      results.push_back(std::move(c));
    }
  }

  // Throws `structural_error` naming the first failed check.
  void require_all_pass(const std::string& context) const {
    if (const CheckResult* f = first_failure()) {
      std::string msg = context + ": check '" + f->name + "' failed";
      if (!f->witness.empty()) msg += " (" + f->witness + ")";
      throw structural_error(msg);
    }
  }
};

}  // namespace gcat

#endif  // GCAT_CHECK_HPP
