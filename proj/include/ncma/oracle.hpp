#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>

#include "ncma/common.hpp"
#include "ncma/phy.hpp"

namespace ncma::oracle {

// Reference implementations, each written independently of the library path
// it cross-checks.

// Explicit delay-line encoder driven directly by the octal generator words.
Bits shift_register_encode(const Bits& info, unsigned poly_a_octal, unsigned poly_b_octal,
                           int memory);

// Brute-force ML sequence decision over all 2^k messages (k small).
// Returns the best message; gap_out, when given, receives the metric margin
// to the runner-up so callers can skip ambiguous draws.
Bits exhaustive_ml_decode(const SoftBits& llrs, int k, double* gap_out = nullptr);

// CRC as textbook polynomial long division of payload * x^32 by the
// generator polynomial.
uint32_t crc_long_division(const Bits& payload);

// Which unknowns are recoverable from a set of XOR equations: XOR over every
// subset of the rows, collecting the unit coefficient vectors.
struct XorEquation {
  uint8_t coeffs = 0;
  Bits payload;
};
std::map<int, Bits> brute_force_recoverable(const std::vector<XorEquation>& eqs, int dim);

// Erasure decode by solving the Vandermonde system with Gaussian elimination;
// field multiplication is recomputed bitwise rather than via tables.
std::optional<std::vector<Bytes>> gauss_rs_decode(int l,
                                                  const std::vector<std::pair<int, Bytes>>& packets);

double qfunc(double x);

struct OracleResult {
  std::string name;
  bool passed = false;
  std::string detail;  // counterexample dump when failed
};

using ViterbiFn = std::function<Bits(const SoftBits&)>;

// Cross-checks every derived quantity the simulator relies on. A custom
// decode function may be injected so harness failures are reportable.
std::vector<OracleResult> oracle_suite(uint64_t seed, const ViterbiFn& viterbi = {});
bool all_passed(const std::vector<OracleResult>& results);

}  // namespace ncma::oracle
