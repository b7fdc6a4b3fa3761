#include "pentadot/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace pentadot {

namespace {

constexpr double kParityTol = 1e-8;

int parity_label(double value) {
  if (std::abs(value - 1.0) < kParityTol) return 1;
  if (std::abs(value + 1.0) < kParityTol) return -1;
  throw std::runtime_error("parity expectation " + std::to_string(value) + " is not +-1 within tolerance");
}

// Multiplies v by the phase that makes <ref|v> real positive.
void fix_phase(Eigen::Ref<Eigen::VectorXcd> v, const Eigen::VectorXcd& ref, double& overlap_out) {
  const cplx overlap = ref.dot(v);
  const double mag = std::abs(overlap);
  if (mag < 1e-10) throw std::runtime_error("reference state has no overlap with the encoded vector");
  v *= std::conj(overlap) / mag;
  overlap_out = mag / ref.norm();
}

}  // namespace

ValenceBondState vb_state(const Pairing& pairing, const SectorBasis& b, const std::vector<int>& doubly_occupied) {
  const int n = b.n_dots();
  std::set<int> used;
  for (int d : doubly_occupied) {
    if (d < 0 || d >= n || !used.insert(d).second) throw std::invalid_argument("invalid doubly occupied dot");
  }
  for (auto [i, j] : pairing) {
    if (i == j || i < 0 || j < 0 || i >= n || j >= n || !used.insert(i).second || !used.insert(j).second) {
      throw std::invalid_argument("pairing is not a matching of distinct free dots");
    }
  }
  const int per_spin = static_cast<int>(pairing.size() + doubly_occupied.size());
  if (b.n_up() != per_spin || b.n_dn() != per_spin) {
    throw std::invalid_argument("valence-bond state needs sector (" + std::to_string(per_spin) + "," +
                                std::to_string(per_spin) + ")");
  }

  ValenceBondState out{pairing, doubly_occupied, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(b.size()))};
  const std::size_t n_configs = std::size_t{1} << pairing.size();
  const double norm = std::pow(0.5, 0.5 * static_cast<double>(pairing.size()));
  for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
    // site_spin: 0 empty, 1 up, 2 down, 3 doubly occupied
    std::vector<int> site_spin(static_cast<std::size_t>(n), 0);
    for (int d : doubly_occupied) site_spin[static_cast<std::size_t>(d)] = 3;
    double coeff = norm;
    for (std::size_t p = 0; p < pairing.size(); ++p) {
      const int lo = std::min(pairing[p].first, pairing[p].second);
      const int hi = std::max(pairing[p].first, pairing[p].second);
      const bool flipped = (cfg >> p) & 1u;
      site_spin[static_cast<std::size_t>(lo)] = flipped ? 2 : 1;
      site_spin[static_cast<std::size_t>(hi)] = flipped ? 1 : 2;
      if (flipped) coeff = -coeff;
    }
    // Operators ordered by ascending dot id; apply the rightmost first.
    FockState s{};
    int sign = 1;
    for (int d = n - 1; d >= 0; --d) {
      const int kind = site_spin[static_cast<std::size_t>(d)];
      std::vector<Spin> ops;
      if (kind == 1) ops = {Spin::Up};
      if (kind == 2) ops = {Spin::Down};
      if (kind == 3) ops = {Spin::Down, Spin::Up};
      for (Spin sp : ops) {
        const auto created = create(s, d, sp);
        s = created->state;
        sign *= created->sign;
      }
    }
    out.vector[static_cast<Eigen::Index>(*b.index(s))] += coeff * sign;
  }
  return out;
}

EncodedBasis gauge_fixed_qubit_basis(const Eigen::MatrixXcd& ground, const SectorBasis& b, const SparseOperator& p_a,
                                     const SparseOperator& p_b, const Eigen::VectorXcd& ref0,
                                     const Eigen::VectorXcd& ref1, std::vector<std::string> parity_names) {
  if (ground.cols() != 2) {
    throw std::runtime_error("ground space has rank " + std::to_string(ground.cols()) + ", expected 2");
  }
  const Eigen::MatrixXcd pa_block = ground.adjoint() * p_a.apply(ground);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (pa_block + pa_block.adjoint()));
  // Ascending eigenvalues: the -1 vector first, that is |0>.
  EncodedBasis out;
  out.n_dots = b.n_dots();
  out.n_up = b.n_up();
  out.n_dn = b.n_dn();
  out.basis_tag = b.tag();
  out.vectors = ground * eig.eigenvectors();

  out.gauge.parity_names = std::move(parity_names);
  for (Eigen::Index k = 0; k < 2; ++k) {
    const Eigen::VectorXcd v = out.vectors.col(k);
    const int la = parity_label(p_a.expectation(v));
    const int lb = parity_label(p_b.expectation(v));
    const int expected = k == 0 ? -1 : 1;
    if (la != expected || lb != expected) {
      throw std::runtime_error("ground space lacks the (-1,-1)/(+1,+1) exchange-parity pattern");
    }
    out.gauge.parity_values.push_back({la, lb});
  }

  out.gauge.reference_overlaps.resize(2);
  fix_phase(out.vectors.col(0), ref0, out.gauge.reference_overlaps[0]);
  Eigen::VectorXcd projected = ground * (ground.adjoint() * ref1);
  projected -= out.vectors.col(0) * out.vectors.col(0).dot(projected);
  fix_phase(out.vectors.col(1), projected, out.gauge.reference_overlaps[1]);
  out.gauge.reference_overlaps[1] = std::abs(ref1.dot(out.vectors.col(1))) / ref1.norm();
  out.gauge.phase_rule =
      "<a|0> > 0 with a=(12)(34); <P(b+c)|1> > 0 with b=(13)(24), c=(14)(23), P the ground projector "
      "minus |0><0|";
  return out;
}

EncodedBasis two_qubit_basis(const Eigen::MatrixXcd& ground, const SectorBasis& b,
                             const std::vector<SparseOperator>& parities, const std::vector<Eigen::VectorXcd>& refs,
                             std::vector<std::string> parity_names) {
  if (ground.cols() != 4) {
    throw std::runtime_error("ground space has rank " + std::to_string(ground.cols()) + ", expected 4");
  }
  if (parities.size() != 4 || refs.size() != 4) throw std::invalid_argument("need four parities and four references");
  const Eigen::MatrixXcd ma = ground.adjoint() * parities[0].apply(ground);
  const Eigen::MatrixXcd mb = ground.adjoint() * parities[2].apply(ground);
  if ((ma * mb - mb * ma).norm() > kParityTol) throw std::runtime_error("qubit parities do not commute on the ground space");
  const Eigen::MatrixXcd combo = ma + 2.0 * mb;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (combo + combo.adjoint()));
  // Eigenvalues of P_A + 2 P_B: -3 |00>, -1 |10>, +1 |01>, +3 |11>.
  const Eigen::Vector4d expected(-3.0, -1.0, 1.0, 3.0);
  if ((eig.eigenvalues() - expected).cwiseAbs().maxCoeff() > kParityTol) {
    throw std::runtime_error("ground space is not spanned by the four parity sectors");
  }
  const int order[4] = {0, 2, 1, 3};

  EncodedBasis out;
  out.n_dots = b.n_dots();
  out.n_up = b.n_up();
  out.n_dn = b.n_dn();
  out.basis_tag = b.tag();
  out.vectors.resize(ground.rows(), 4);
  for (int k = 0; k < 4; ++k) out.vectors.col(k) = ground * eig.eigenvectors().col(order[k]);

  out.gauge.parity_names = std::move(parity_names);
  out.gauge.reference_overlaps.resize(4);
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXcd v = out.vectors.col(k);
    std::vector<int> labels;
    for (const auto& p : parities) labels.push_back(parity_label(p.expectation(v)));
    const int qa = (k >> 1) & 1;
    const int qb = k & 1;
    const int ea = qa ? 1 : -1;
    const int eb = qb ? 1 : -1;
    if (labels[0] != ea || labels[1] != ea || labels[2] != eb || labels[3] != eb) {
      throw std::runtime_error("two-qubit ground space has an unexpected parity signature");
    }
    out.gauge.parity_values.push_back(labels);
    fix_phase(out.vectors.col(k), refs[static_cast<std::size_t>(k)], out.gauge.reference_overlaps[static_cast<std::size_t>(k)]);
  }
  out.gauge.phase_rule = "<ref_A (x) ref_B|ab> > 0 with ref_0 = (12)(34), ref_1 = (13)(24)+(14)(23) per qubit";
  return out;
}

ValenceBondGeometry valence_bond_geometry(const SectorBasis& b, const std::vector<int>& doubly_occupied) {
  const Eigen::VectorXcd a = vb_state(kPairingA_a, b, doubly_occupied).vector;
  const Eigen::VectorXcd bb = vb_state(kPairingA_b, b, doubly_occupied).vector;
  const Eigen::VectorXcd c = vb_state(kPairingA_c, b, doubly_occupied).vector;
  ValenceBondGeometry out;
  const Eigen::VectorXcd* vs[3] = {&a, &bb, &c};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out.gram(i, j) = vs[i]->dot(*vs[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(out.gram);
  out.smallest_gram_eigenvalue = eig.eigenvalues()[0];
  out.one_state_norm = (bb + c).norm();
  return out;
}

QubitSetup encode_single_qubit(const DeviceGraph& g, int n_electrons, const SolverOptions& opts) {
  if (g.n_dots() != 5) throw std::invalid_argument("single-qubit encoding needs the five-dot device");
  if (n_electrons != 4 && n_electrons != 6) throw std::invalid_argument("encoding uses 4 or 6 electrons");
  const int per_spin = n_electrons / 2;
  SectorBasis basis(5, per_spin, per_spin);
  SparseOperator h = assemble_hubbard(g, basis);
  SparseOperator s2 = assemble_s2(basis);
  DegeneracyReport report = classify_ground_space(h, s2, std::min<std::size_t>(basis.size(), 6), opts);
  const std::vector<int> filled = n_electrons == 6 ? std::vector<int>{0} : std::vector<int>{};
  const Eigen::VectorXcd ref0 = vb_state(kPairingA_a, basis, filled).vector;
  const Eigen::VectorXcd ref1 = vb_state(kPairingA_b, basis, filled).vector + vb_state(kPairingA_c, basis, filled).vector;
  const SparseOperator p12 = exchange_parity(transposition(5, 1, 2), basis);
  const SparseOperator p34 = exchange_parity(transposition(5, 3, 4), basis);
  EncodedBasis encoded = gauge_fixed_qubit_basis(report.ground_vectors(), basis, p12, p34, ref0, ref1);
  const double idle = report.ground().mean_energy;
  return QubitSetup{g, std::move(basis), std::move(h), std::move(s2), std::move(report), std::move(encoded), idle, opts};
}

QubitSetup encode_two_qubits(const DeviceGraph& g10, const SolverOptions& opts) {
  if (g10.n_dots() != 10) throw std::invalid_argument("two-qubit encoding needs the ten-dot device");
  SectorBasis basis(10, 4, 4);
  SparseOperator h = assemble_hubbard(g10, basis);
  SparseOperator s2 = assemble_s2(basis);
  DegeneracyReport report = classify_ground_space(h, s2, 5, opts);

  auto combined = [&](const std::vector<const Pairing*>& a_terms, const std::vector<const Pairing*>& b_terms) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const Pairing* pa : a_terms) {
      for (const Pairing* pb : b_terms) {
        Pairing both = *pa;
        both.insert(both.end(), pb->begin(), pb->end());
        v += vb_state(both, basis).vector;
      }
    }
    return v;
  };
  const std::vector<const Pairing*> a0{&kPairingA_a}, a1{&kPairingA_b, &kPairingA_c};
  const std::vector<const Pairing*> b0{&kPairingB_a}, b1{&kPairingB_b, &kPairingB_c};
  const std::vector<Eigen::VectorXcd> refs{combined(a0, b0), combined(a0, b1), combined(a1, b0), combined(a1, b1)};
  std::vector<SparseOperator> parities{
      exchange_parity(transposition(10, 1, 2), basis), exchange_parity(transposition(10, 3, 4), basis),
      exchange_parity(transposition(10, 6, 7), basis), exchange_parity(transposition(10, 8, 9), basis)};
  EncodedBasis encoded =
      two_qubit_basis(report.ground_vectors(), basis, parities, refs, {"P12", "P34", "P67", "P89"});
  const double idle = report.ground().mean_energy;
  return QubitSetup{g10, std::move(basis), std::move(h), std::move(s2), std::move(report), std::move(encoded), idle, opts};
}

}  // namespace pentadot
