#pragma once

#include <string_view>
#include <vector>

#include "cadkit/formula.hpp"

namespace cadkit {

/// m polynomials of degree at most d in each of n variables, coefficients of
/// bit length at most l.
struct BoundParams {
  unsigned long m = 1, d = 1, l = 1, n = 1;
};

enum class BoundKind { CollinsTime, CollinsCells, McCallumCells, McCallumCellsRefined, DavenportTime };
const char* bound_name(BoundKind k);
BoundKind parse_bound_kind(std::string_view s);
const std::vector<BoundKind>& all_bound_kinds();

/// Exact value of the expression inside the O(.) of the named bound:
///   collins-time            m^(2^(n+6)) (2d)^(2^(2n+8)) l^3
///   collins-cells           m^(2^n) (2d)^(2*3^n)
///   mccallum-cells          m^(2^n) (2d)^(n*2^n)
///   mccallum-cells-refined  2^(2^(n-1)) m (m+1)^(2^n-2) d^(2^n-1)
///   davenport-time          m^(2^(n+4)) (2d)^(2^(2n+6)) l^3
/// The values indicate growth only; the hidden constants are unknown.
/// Raises InvalidArgument for zero parameters or values beyond 2^(2^26) bits.
Integer bound(const BoundParams& p, BoundKind which);

/// The doubly-exponential construction applied m-1 times to a base formula
/// "y = F(x)" (left side a single variable, right side a polynomial in one
/// other variable). Variables are renamed x1..xm, y1..ym, z2..zm; step k
/// reads
///   exists zk forall x(k-1), y(k-1).
///     ((y(k-1) = yk /\ x(k-1) = zk) \/ (y(k-1) = zk /\ x(k-1) = xk)) -> step k-1
/// and the result, already in prenex form over the order xm, ym, zm,
/// x(m-1), y(m-1), ..., x1, y1, holds exactly when ym = F^(2^(m-1))(xm).
ParsedFormula generate_dh(int m, std::string_view base);

}  // namespace cadkit
