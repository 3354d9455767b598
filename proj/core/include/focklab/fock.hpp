// fock.hpp — Truncated Fock-space core: states, operators, tensor structure.
//
// Conventions used throughout the library:
//   [x̂, p̂] = i,  x̂ = (â + â†)/√2,  p̂ = i(â† − â)/√2,  vacuum ⟨x̂²⟩ = 1/2.
//   A mode truncated at nmax spans |0⟩..|nmax⟩ (dimension nmax + 1).
//   Multimode indices flatten row-major with mode 0 slowest (leftmost).
//
// All free functions are pure (inputs by value/const-ref, fresh outputs), so
// callers may evaluate them concurrently; grid sweeps are data-parallel.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace focklab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ------------------------------ error classes -------------------------------

// Numerical failure of an otherwise well-posed request (vanishing weight,
// optimizer breakdown, non-increasing likelihood, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File / stream problems (missing file, malformed row, short read, ...).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------ warning channel -----------------------------

// Non-fatal notices (truncation loss and similar). Default handler writes
// "focklab: warning: ..." to stderr; tests may swap it out.
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

// ------------------------------ truncation ----------------------------------

// Basis cutoff for one mode. Structurally nmax >= 1; constructors of states
// that populate |3⟩ check nmax >= 3 themselves.
struct Truncation {
  int nmax;

  explicit Truncation(int nmax_in) : nmax(nmax_in) {
    if (nmax < 1) throw std::invalid_argument("Truncation: nmax must be >= 1");
  }
  int dim() const { return nmax + 1; }
};

// ------------------------------ domain types --------------------------------

struct DensityMatrix;  // fwd

// Pure state of one or more modes; amps flattened row-major over dims.
struct StateVector {
  std::vector<int> dims;
  Vector amps;

  StateVector(std::vector<int> dims_in, Vector amps_in);
  static StateVector zero(const std::vector<int>& dims);

  int n_modes() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  double norm() const { return amps.norm(); }
  StateVector& normalize();  // in place; throws numeric_error on ~zero norm
};

// Mixed state; m is (total_dim × total_dim), flattening matches StateVector.
struct DensityMatrix {
  std::vector<int> dims;
  Matrix m;

  DensityMatrix(std::vector<int> dims_in, Matrix m_in);

  int n_modes() const { return static_cast<int>(dims.size()); }
  int total_dim() const { return static_cast<int>(m.rows()); }
  Complex trace() const { return m.trace(); }
  DensityMatrix& normalize();  // divide by trace; throws on ~zero trace
};

// Linear operator on the same flattened space; label is a human-readable tag.
struct ModeOperator {
  std::vector<int> dims;
  Matrix m;
  std::string label;

  ModeOperator(std::vector<int> dims_in, Matrix m_in, std::string label_in = "");

  int total_dim() const { return static_cast<int>(m.rows()); }
  ModeOperator adjoint() const { return {dims, m.adjoint(), label + "^dag"}; }
};

// ------------------------------ constructors --------------------------------

DensityMatrix to_density(const StateVector& psi);

// Single-mode ladder and quadrature operators: ⟨n−1|â|n⟩ = √n.
ModeOperator destroy(Truncation t);
ModeOperator create(Truncation t);
ModeOperator number_op(Truncation t);
ModeOperator identity_op(Truncation t);
ModeOperator identity_op(const std::vector<int>& dims);

enum class Quad { x, p };
ModeOperator quadrature(Truncation t, Quad which);

// ------------------------------ composition ---------------------------------

StateVector tensor(const std::vector<StateVector>& parts);
DensityMatrix tensor(const std::vector<DensityMatrix>& parts);
ModeOperator tensor(const std::vector<ModeOperator>& parts);

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
ModeOperator tensor(const ModeOperator& a, const ModeOperator& b);

// Embed a single-mode operator at position `mode` of a multimode register.
ModeOperator embed(const ModeOperator& op, int mode, const std::vector<int>& dims);

// Keep the listed modes (ascending output order), trace out the rest.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// ------------------------------ algebra -------------------------------------

StateVector apply(const ModeOperator& op, const StateVector& psi);
DensityMatrix sandwich(const ModeOperator& u, const DensityMatrix& rho);  // UρU†

Complex overlap(const StateVector& a, const StateVector& b);  // ⟨a|b⟩
Complex expectation(const DensityMatrix& rho, const ModeOperator& op);   // Tr[ρÔ]
Complex expectation(const StateVector& psi, const ModeOperator& op);     // ⟨ψ|Ô|ψ⟩

// exp(G) for anti-Hermitian G, via eigendecomposition of −iG. The result is
// unitary to machine precision; accuracy beats 1e−10 comfortably at the
// matrix sizes used here (this is the scaling-free alternative to Padé, valid
// because every generator in the library is anti-Hermitian).
Matrix expm_antihermitian(const Matrix& g);

// ------------------------------ checks --------------------------------------

bool is_hermitian(const Matrix& m, double tol = 1e-10);
double min_eigenvalue(const Matrix& hermitian_m);

// ‖U†U − 1‖∞ restricted to basis states whose every mode index stays at least
// `guard` levels below its cutoff (truncation edge excluded from the check).
bool is_unitary_guarded(const ModeOperator& u, int guard = 2, double tol = 1e-10);

}  // namespace focklab
