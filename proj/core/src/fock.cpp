// fock.cpp — Implementation of the truncated Fock-space core.

#include "focklab/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>

namespace focklab {

namespace {

long long checked_product(const std::vector<int>& dims) {
  if (dims.empty()) throw std::invalid_argument("dims must be non-empty");
  long long p = 1;
  for (int d : dims) {
    if (d < 2) throw std::invalid_argument("every mode dimension must be >= 2");
    p *= d;
    if (p > (1 << 22)) throw std::invalid_argument("register too large");
  }
  return p;
}

std::mutex g_warn_mutex;
std::function<void(const std::string&)> g_warn_handler =
    [](const std::string& msg) { std::cerr << "focklab: warning: " << msg << "\n"; };

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(const std::string& message) {
  std::function<void(const std::string&)> h;
  {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    h = g_warn_handler;
  }
  if (h) h(message);
}

// ------------------------------ domain types --------------------------------

StateVector::StateVector(std::vector<int> dims_in, Vector amps_in)
    : dims(std::move(dims_in)), amps(std::move(amps_in)) {
  if (checked_product(dims) != amps.size())
    throw std::invalid_argument("StateVector: amplitude length != product of dims");
}

StateVector StateVector::zero(const std::vector<int>& dims) {
  return {dims, Vector::Zero(checked_product(dims))};
}

int StateVector::total_dim() const { return static_cast<int>(amps.size()); }

StateVector& StateVector::normalize() {
  const double n = amps.norm();
  if (n < 1e-300) throw numeric_error("StateVector::normalize: zero state");
  amps /= n;
  return *this;
}

DensityMatrix::DensityMatrix(std::vector<int> dims_in, Matrix m_in)
    : dims(std::move(dims_in)), m(std::move(m_in)) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  if (checked_product(dims) != m.rows())
    throw std::invalid_argument("DensityMatrix: size != product of dims");
}

DensityMatrix& DensityMatrix::normalize() {
  const double tr = m.trace().real();
  if (std::abs(tr) < 1e-300) throw numeric_error("DensityMatrix::normalize: zero trace");
  m /= tr;
  return *this;
}

ModeOperator::ModeOperator(std::vector<int> dims_in, Matrix m_in, std::string label_in)
    : dims(std::move(dims_in)), m(std::move(m_in)), label(std::move(label_in)) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("ModeOperator: matrix must be square");
  if (checked_product(dims) != m.rows())
    throw std::invalid_argument("ModeOperator: size != product of dims");
}

// ------------------------------ constructors --------------------------------

DensityMatrix to_density(const StateVector& psi) {
  return {psi.dims, psi.amps * psi.amps.adjoint()};
}

ModeOperator destroy(Truncation t) {
  const int d = t.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {{d}, std::move(m), "a"};
}

ModeOperator create(Truncation t) {
  ModeOperator a = destroy(t);
  return {a.dims, a.m.adjoint(), "a^dag"};
}

ModeOperator number_op(Truncation t) {
  const int d = t.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
  return {{d}, std::move(m), "n"};
}

ModeOperator identity_op(Truncation t) {
  const int d = t.dim();
  return {{d}, Matrix::Identity(d, d), "1"};
}

ModeOperator identity_op(const std::vector<int>& dims) {
  const long long p = checked_product(dims);
  return {dims, Matrix::Identity(p, p), "1"};
}

ModeOperator quadrature(Truncation t, Quad which) {
  const Matrix a = destroy(t).m;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (which == Quad::x)
    return {{t.dim()}, (a + a.adjoint()) * inv_sqrt2, "x"};
  return {{t.dim()}, Complex(0.0, 1.0) * (a.adjoint() - a) * inv_sqrt2, "p"};
}

// ------------------------------ composition ---------------------------------

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<int> concat_dims(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

StateVector tensor(const StateVector& a, const StateVector& b) {
  return {concat_dims(a.dims, b.dims), kron_vec(a.amps, b.amps)};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return {concat_dims(a.dims, b.dims), kron(a.m, b.m)};
}

ModeOperator tensor(const ModeOperator& a, const ModeOperator& b) {
  return {concat_dims(a.dims, b.dims), kron(a.m, b.m), a.label + "⊗" + b.label};
}

StateVector tensor(const std::vector<StateVector>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: no parts");
  StateVector out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

DensityMatrix tensor(const std::vector<DensityMatrix>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: no parts");
  DensityMatrix out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

ModeOperator tensor(const std::vector<ModeOperator>& parts) {
  if (parts.empty()) throw std::invalid_argument("tensor: no parts");
  ModeOperator out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, parts[i]);
  return out;
}

ModeOperator embed(const ModeOperator& op, int mode, const std::vector<int>& dims) {
  const int n = static_cast<int>(dims.size());
  if (mode < 0 || mode >= n) throw std::invalid_argument("embed: mode out of range");
  if (op.dims.size() != 1 || op.dims[0] != dims[mode])
    throw std::invalid_argument("embed: operator dimension mismatch at target mode");
  long long before = 1, after = 1;
  for (int k = 0; k < mode; ++k) before *= dims[k];
  for (int k = mode + 1; k < n; ++k) after *= dims[k];
  Matrix m = kron(kron(Matrix::Identity(before, before), op.m),
                  Matrix::Identity(after, after));
  return {dims, std::move(m), op.label + "@" + std::to_string(mode)};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.n_modes();
  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  if (k.empty()) throw std::invalid_argument("partial_trace: keep list empty");
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw std::invalid_argument("partial_trace: duplicate mode in keep list");
  if (k.front() < 0 || k.back() >= n)
    throw std::invalid_argument("partial_trace: mode index out of range");

  std::vector<bool> kept(n, false);
  for (int km : k) kept[km] = true;

  // Row-major strides of the full register, mode 0 slowest.
  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * rho.dims[i + 1];

  std::vector<int> out_dims;
  for (int km : k) out_dims.push_back(rho.dims[km]);
  long long out_dim = 1;
  for (int d : out_dims) out_dim *= d;

  Matrix out = Matrix::Zero(out_dim, out_dim);
  const long long full = rho.total_dim();
  std::vector<int> ridx(n), cidx(n);
  for (long long r = 0; r < full; ++r) {
    long long rr = r;
    for (int i = 0; i < n; ++i) { ridx[i] = static_cast<int>(rr / stride[i]); rr %= stride[i]; }
    for (long long c = 0; c < full; ++c) {
      long long cc = c;
      bool diag_traced = true;
      for (int i = 0; i < n; ++i) {
        cidx[i] = static_cast<int>(cc / stride[i]);
        cc %= stride[i];
        if (!kept[i] && cidx[i] != ridx[i]) { diag_traced = false; break; }
      }
      if (!diag_traced) continue;
      long long ro = 0, co = 0;
      for (int km : k) {
        ro = ro * rho.dims[km] + ridx[km];
        co = co * rho.dims[km] + cidx[km];
      }
      out(ro, co) += rho.m(r, c);
    }
  }
  return {out_dims, std::move(out)};
}

// ------------------------------ algebra -------------------------------------

namespace {

void require_same_space(const std::vector<int>& a, const std::vector<int>& b,
                        const char* who) {
  if (a != b) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

StateVector apply(const ModeOperator& op, const StateVector& psi) {
  require_same_space(op.dims, psi.dims, "apply");
  return {psi.dims, op.m * psi.amps};
}

DensityMatrix sandwich(const ModeOperator& u, const DensityMatrix& rho) {
  require_same_space(u.dims, rho.dims, "sandwich");
  return {rho.dims, u.m * rho.m * u.m.adjoint()};
}

Complex overlap(const StateVector& a, const StateVector& b) {
  require_same_space(a.dims, b.dims, "overlap");
  return a.amps.dot(b.amps);  // Eigen dot conjugates the left argument
}

Complex expectation(const DensityMatrix& rho, const ModeOperator& op) {
  require_same_space(rho.dims, op.dims, "expectation");
  return (rho.m.transpose().array() * op.m.array()).sum();  // Tr[ρÔ]
}

Complex expectation(const StateVector& psi, const ModeOperator& op) {
  require_same_space(psi.dims, op.dims, "expectation");
  return psi.amps.dot(op.m * psi.amps);
}

Matrix expm_antihermitian(const Matrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("expm: matrix must be square");
  // G = iH with H Hermitian; exp(G) = V diag(e^{iλ}) V†.
  const Matrix h = Complex(0.0, -1.0) * g;
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("expm_antihermitian: generator is not anti-Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) * 0.5);
  const Eigen::VectorXd lam = es.eigenvalues();
  Vector phase(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    phase(i) = std::exp(Complex(0.0, lam(i)));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

// ------------------------------ checks --------------------------------------

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Matrix& hermitian_m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((hermitian_m + hermitian_m.adjoint()) * 0.5);
  return es.eigenvalues().minCoeff();
}

bool is_unitary_guarded(const ModeOperator& u, int guard, double tol) {
  const Matrix err = u.m.adjoint() * u.m - Matrix::Identity(u.m.rows(), u.m.cols());
  const int n = static_cast<int>(u.dims.size());
  std::vector<long long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * u.dims[i + 1];
  auto inside = [&](long long flat) {
    for (int i = 0; i < n; ++i) {
      const int idx = static_cast<int>(flat / stride[i]);
      flat %= stride[i];
      if (idx > u.dims[i] - 1 - guard) return false;
    }
    return true;
  };
  double worst = 0.0;
  for (long long r = 0; r < err.rows(); ++r) {
    if (!inside(r)) continue;
    for (long long c = 0; c < err.cols(); ++c) {
      if (!inside(c)) continue;
      worst = std::max(worst, std::abs(err(r, c)));
    }
  }
  return worst <= tol;
}

}  // namespace focklab
