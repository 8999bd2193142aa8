#include "nbx/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace nbx::oracle {

namespace {

void require_cap(const DirectedEdgeIndex& index, int cap) {
    if (index.count() > cap)
        throw CapExceededError("dense oracle cap exceeded: 2m = " + std::to_string(index.count()));
}

int perron_index(const Eigen::VectorXcd& lambda) {
    int best = -1;
    for (int i = 0; i < lambda.size(); ++i) {
        if (std::abs(lambda(i).imag()) >= 1e-8) continue;
        if (best == -1 || lambda(i).real() > lambda(best).real()) best = i;
    }
    return best;
}

struct LogDet {
    double log_abs = 0.0;
    int sign = 1;  // 0 for singular
};

// LU with partial pivoting, accumulating log|det| and sign
LogDet log_det(Eigen::MatrixXd m) {
    const auto n = m.rows();
    LogDet result;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        for (Eigen::Index i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(pivot, k))) pivot = i;
        if (m(pivot, k) == 0.0) return {0.0, 0};
        if (pivot != k) {
            m.row(pivot).swap(m.row(k));
            result.sign = -result.sign;
        }
        const double p = m(k, k);
        result.log_abs += std::log(std::abs(p));
        if (p < 0.0) result.sign = -result.sign;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double factor = m(i, k) / p;
            m.row(i).tail(n - k - 1) -= factor * m.row(k).tail(n - k - 1);
        }
    }
    return result;
}

}  // namespace

Eigen::MatrixXd dense_nb_matrix(const Graph& g, const DirectedEdgeIndex& index, int cap) {
    require_cap(index, cap);
    const EdgeId dim = index.count();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
    for (EdgeId col = 0; col < dim; ++col) {
        const NodeId j = index.target(col);
        // rows j->l for all neighbors l of j except the backtrack target
        const NodeId i = index.source(col);
        for (NodeId l : g.neighbors(j)) {
            if (l == i) continue;
            b(index.index_of(j, l), col) = 1.0;
        }
    }
    return b;
}

Eigen::MatrixXd dense_reversal(const DirectedEdgeIndex& index, int cap) {
    require_cap(index, cap);
    const EdgeId dim = index.count();
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    for (EdgeId e = 0; e < dim; ++e) p(DirectedEdgeIndex::reverse(e), e) = 1.0;
    return p;
}

Eigen::MatrixXd dense_aux_matrix(const Graph& g) {
    const NodeId n = g.num_nodes();
    Eigen::MatrixXd aux = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (NodeId u = 0; u < n; ++u) {
        aux(u, n + u) = g.degree(u) - 1.0;
        aux(n + u, u) = -1.0;
        for (NodeId v : g.neighbors(u)) aux(n + u, n + v) = 1.0;
    }
    return aux;
}

DenseBlocks make_blocks(const Graph& g, const DirectedEdgeIndex& index, NodeId c, int cap) {
    require_cap(index, cap);
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");

    DenseBlocks blocks;
    blocks.c = c;
    blocks.degree_c = g.degree(c);
    const EdgeId dim = index.count();
    for (EdgeId e = 0; e < dim; ++e) {
        if (index.source(e) == c || index.target(e) == c)
            blocks.star.push_back(e);
        else
            blocks.kept.push_back(e);
    }
    blocks.b = dense_nb_matrix(g, index, cap);

    const auto kept_n = static_cast<Eigen::Index>(blocks.kept.size());
    const auto star_n = static_cast<Eigen::Index>(blocks.star.size());
    blocks.b_prime.resize(kept_n, kept_n);
    blocks.d_block.resize(kept_n, star_n);
    blocks.e_block.resize(star_n, kept_n);
    blocks.f_block.resize(star_n, star_n);
    for (Eigen::Index r = 0; r < kept_n; ++r)
        for (Eigen::Index s = 0; s < kept_n; ++s)
            blocks.b_prime(r, s) = blocks.b(blocks.kept[static_cast<std::size_t>(r)],
                                            blocks.kept[static_cast<std::size_t>(s)]);
    for (Eigen::Index r = 0; r < kept_n; ++r)
        for (Eigen::Index s = 0; s < star_n; ++s)
            blocks.d_block(r, s) = blocks.b(blocks.kept[static_cast<std::size_t>(r)],
                                            blocks.star[static_cast<std::size_t>(s)]);
    for (Eigen::Index r = 0; r < star_n; ++r)
        for (Eigen::Index s = 0; s < kept_n; ++s)
            blocks.e_block(r, s) = blocks.b(blocks.star[static_cast<std::size_t>(r)],
                                            blocks.kept[static_cast<std::size_t>(s)]);
    for (Eigen::Index r = 0; r < star_n; ++r)
        for (Eigen::Index s = 0; s < star_n; ++s)
            blocks.f_block(r, s) = blocks.b(blocks.star[static_cast<std::size_t>(r)],
                                            blocks.star[static_cast<std::size_t>(s)]);
    blocks.x = blocks.d_block * blocks.f_block * blocks.e_block;
    return blocks;
}

Eigen::MatrixXd reduced_reversal(const DenseBlocks& blocks, const DirectedEdgeIndex& index) {
    const auto kept_n = static_cast<Eigen::Index>(blocks.kept.size());
    std::vector<Eigen::Index> position(static_cast<std::size_t>(index.count()),
                                       static_cast<Eigen::Index>(-1));
    for (Eigen::Index r = 0; r < kept_n; ++r)
        position[static_cast<std::size_t>(blocks.kept[static_cast<std::size_t>(r)])] = r;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(kept_n, kept_n);
    for (Eigen::Index r = 0; r < kept_n; ++r) {
        const EdgeId rev = DirectedEdgeIndex::reverse(blocks.kept[static_cast<std::size_t>(r)]);
        p(position[static_cast<std::size_t>(rev)], r) = 1.0;
    }
    return p;
}

DenseEigen dense_eigen(const Eigen::MatrixXd& m, double cond_tol) {
    DenseEigen result;
    if (m.rows() == 0) return result;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw ConditioningError("eigendecomposition failed");
    result.r = solver.eigenvectors();
    result.lambda = solver.eigenvalues();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(result.r);
    if (!lu.isInvertible()) throw ConditioningError("eigenvector matrix is singular");
    result.l = lu.inverse();
    const double residual =
        (result.l * result.r - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (residual > cond_tol)
        throw ConditioningError("near-defective matrix: L*R deviates from identity by " +
                                std::to_string(residual));
    // the L*R residual alone misses near-defectiveness: the inverse can be
    // accurate in a relative sense while its entries blow up and destroy the
    // absolute precision of any expansion in this basis
    const double basis_cond = result.l.cwiseAbs().maxCoeff();
    if (basis_cond > 1.0 / cond_tol)
        throw ConditioningError("near-defective matrix: eigenbasis condition " +
                                std::to_string(basis_cond));
    const double recon = (m.cast<std::complex<double>>() * result.r -
                          result.r * result.lambda.asDiagonal().toDenseMatrix())
                             .cwiseAbs()
                             .maxCoeff();
    if (recon > cond_tol)
        throw ConditioningError("eigendecomposition residual too large: " + std::to_string(recon));
    result.perron = perron_index(result.lambda);
    return result;
}

Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    return solver.eigenvalues();
}

double dense_lambda1(const Graph& g, int cap) {
    DirectedEdgeIndex index(g);
    if (index.count() == 0) return 0.0;
    require_cap(index, cap);
    const Eigen::VectorXcd lambda = dense_eigenvalues(dense_nb_matrix(g, index, cap));
    const int idx = perron_index(lambda);
    return idx < 0 ? 0.0 : std::max(0.0, lambda(idx).real());
}

BlockIdentities block_identities_check(const Graph& g, NodeId c, int cap) {
    DirectedEdgeIndex index(g);
    DenseBlocks blocks = make_blocks(g, index, c, cap);
    BlockIdentities result;
    result.de_zero = (blocks.d_block * blocks.e_block).isZero(0.0);
    result.f_squared_zero = (blocks.f_block * blocks.f_block).isZero(0.0);
    {
        const auto star_n = blocks.f_block.rows();
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(star_n, star_n);
        result.inverse_identity = ((blocks.f_block - id) * (blocks.f_block + id) + id).isZero(0.0);
    }
    {
        // X_{k->l, i->j} = a_ck * a_cj * (1 - delta_kj) over kept edges
        const auto kept_n = static_cast<Eigen::Index>(blocks.kept.size());
        Eigen::MatrixXd formula = Eigen::MatrixXd::Zero(kept_n, kept_n);
        for (Eigen::Index r = 0; r < kept_n; ++r) {
            const NodeId k = index.source(blocks.kept[static_cast<std::size_t>(r)]);
            if (!g.has_edge(c, k)) continue;
            for (Eigen::Index s = 0; s < kept_n; ++s) {
                const NodeId j = index.target(blocks.kept[static_cast<std::size_t>(s)]);
                if (j == k || !g.has_edge(c, j)) continue;
                formula(r, s) = 1.0;
            }
        }
        result.x_matches_formula = (blocks.x - formula).isZero(0.0);
    }
    {
        // permuting [B', D; E, F] back must reproduce B exactly
        std::vector<EdgeId> order = blocks.kept;
        order.insert(order.end(), blocks.star.begin(), blocks.star.end());
        const auto dim = static_cast<Eigen::Index>(order.size());
        Eigen::MatrixXd assembled(dim, dim);
        const auto kept_n = static_cast<Eigen::Index>(blocks.kept.size());
        assembled.topLeftCorner(kept_n, kept_n) = blocks.b_prime;
        assembled.topRightCorner(kept_n, dim - kept_n) = blocks.d_block;
        assembled.bottomLeftCorner(dim - kept_n, kept_n) = blocks.e_block;
        assembled.bottomRightCorner(dim - kept_n, dim - kept_n) = blocks.f_block;
        bool ok = true;
        for (Eigen::Index r = 0; r < dim && ok; ++r)
            for (Eigen::Index s = 0; s < dim && ok; ++s)
                ok = assembled(r, s) == blocks.b(order[static_cast<std::size_t>(r)],
                                                 order[static_cast<std::size_t>(s)]);
        result.reassembly_ok = ok;
    }
    return result;
}

DeterminantRatioResult determinant_ratio_check(const Graph& g, NodeId c, std::span<const double> t_samples, int cap) {
    DirectedEdgeIndex index(g);
    DenseBlocks blocks = make_blocks(g, index, c, cap);
    const Eigen::VectorXcd b_prime_eigs = dense_eigenvalues(blocks.b_prime);

    DeterminantRatioResult result;
    const auto dim = blocks.b.rows();
    const auto kept_n = blocks.b_prime.rows();
    for (double t : t_samples) {
        if (t == 0.0) {
            ++result.skipped;
            continue;
        }
        bool collides = false;
        for (Eigen::Index i = 0; i < b_prime_eigs.size(); ++i)
            if (std::abs(b_prime_eigs(i) - std::complex<double>(t, 0.0)) < 1e-6) collides = true;
        if (collides) {
            ++result.skipped;
            continue;
        }

        const LogDet lhs_num = log_det(blocks.b - t * Eigen::MatrixXd::Identity(dim, dim));
        const Eigen::MatrixXd b_prime_shift =
            blocks.b_prime - t * Eigen::MatrixXd::Identity(kept_n, kept_n);
        const LogDet lhs_den = log_det(b_prime_shift);

        // RHS: t^{2d} * det(I + (B' - tI)^{-1} X / t^2)
        const Eigen::MatrixXd solved = b_prime_shift.partialPivLu().solve(blocks.x);
        const LogDet rhs_det =
            log_det(Eigen::MatrixXd::Identity(kept_n, kept_n) + solved / (t * t));
        const double rhs_log = 2.0 * blocks.degree_c * std::log(std::abs(t)) + rhs_det.log_abs;
        const int rhs_sign = rhs_det.sign;  // t^{2d} > 0

        double rel_err;
        if (lhs_den.sign == 0 || rhs_sign == 0 || lhs_num.sign == 0) {
            rel_err = (lhs_num.sign == 0 && rhs_sign == 0) ? 0.0
                                                           : std::numeric_limits<double>::infinity();
        } else if (lhs_num.sign * lhs_den.sign != rhs_sign) {
            rel_err = std::numeric_limits<double>::infinity();
        } else {
            rel_err = std::abs(std::expm1((lhs_num.log_abs - lhs_den.log_abs) - rhs_log));
        }
        result.max_rel_error = std::max(result.max_rel_error, rel_err);
        ++result.evaluated;
    }
    return result;
}

EigenDropExpansion eigen_drop_expansion(const Graph& g, NodeId c, int cap) {
    DirectedEdgeIndex index(g);
    DenseBlocks blocks = make_blocks(g, index, c, cap);

    EigenDropExpansion result;
    {
        const Eigen::VectorXcd eigs = dense_eigenvalues(blocks.b);
        const int idx = perron_index(eigs);
        result.lambda1 = idx < 0 ? 0.0 : std::max(0.0, eigs(idx).real());
    }
    if (result.lambda1 == 0.0) throw ConditioningError("graph has zero leading NB-eigenvalue");

    DenseEigen eig = dense_eigen(blocks.b_prime);
    if (eig.perron < 0) throw ConditioningError("no real eigenvalue found for B'");
    result.lambda1_prime = eig.lambda(eig.perron).real();
    result.true_drop = result.lambda1 - result.lambda1_prime;

    const double lam_sq = result.lambda1 * result.lambda1;
    const Eigen::MatrixXd m = blocks.b_prime + blocks.x / lam_sq;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw ConditioningError("eigendecomposition of B' + X/lambda^2 failed");
    // w is the eigenvector whose eigenvalue matches lambda1
    int w_idx = 0;
    for (int i = 1; i < solver.eigenvalues().size(); ++i)
        if (std::abs(solver.eigenvalues()(i) - std::complex<double>(result.lambda1, 0.0)) <
            std::abs(solver.eigenvalues()(w_idx) - std::complex<double>(result.lambda1, 0.0)))
            w_idx = i;
    const Eigen::VectorXcd w = solver.eigenvectors().col(w_idx);

    const Eigen::VectorXcd coeffs = eig.l * w;
    const std::complex<double> w1 = coeffs(eig.perron);
    if (std::abs(w1) < 1e-12) throw ConditioningError("w has no component along the Perron direction");

    const Eigen::RowVectorXcd u1 = eig.l.row(eig.perron);
    const Eigen::RowVectorXcd alphas = u1 * blocks.x.cast<std::complex<double>>() * eig.r;

    std::complex<double> sum = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) sum += (coeffs(i) / w1) * alphas(i);
    sum /= lam_sq;
    result.sum = sum.real();
    result.dominant_term = alphas(eig.perron).real() / lam_sq;
    return result;
}

XdegBoundResult xdeg_bound_check(const Graph& g, NodeId c, int cap) {
    DirectedEdgeIndex index(g);
    DenseBlocks blocks = make_blocks(g, index, c, cap);

    XdegBoundResult result;
    // 1^T P X 1 over the kept edges
    const Eigen::MatrixXd px = reduced_reversal(blocks, index) * blocks.x;
    result.x_degree = px.sum();

    if (blocks.kept.empty()) {
        result.holds = result.q <= result.x_degree + 1e-8;
        return result;
    }

    double lambda1;
    {
        const Eigen::VectorXcd eigs = dense_eigenvalues(blocks.b);
        const int idx = perron_index(eigs);
        lambda1 = idx < 0 ? 0.0 : std::max(0.0, eigs(idx).real());
    }
    if (lambda1 == 0.0) {
        // no NB-walks at all: X = 0 and q = 0
        result.holds = true;
        return result;
    }

    DenseEigen eig = dense_eigen(blocks.b_prime);
    if (eig.perron < 0) throw ConditioningError("no real eigenvalue found for B'");

    const Eigen::MatrixXd m = blocks.b_prime + blocks.x / (lambda1 * lambda1);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw ConditioningError("eigendecomposition of B' + X/lambda^2 failed");
    int w_idx = 0;
    for (int i = 1; i < solver.eigenvalues().size(); ++i)
        if (std::abs(solver.eigenvalues()(i) - std::complex<double>(lambda1, 0.0)) <
            std::abs(solver.eigenvalues()(w_idx) - std::complex<double>(lambda1, 0.0)))
            w_idx = i;
    Eigen::VectorXcd w = solver.eigenvectors().col(w_idx);

    Eigen::VectorXcd coeffs = eig.l * w;
    const std::complex<double> w1 = coeffs(eig.perron);
    if (std::abs(w1) < 1e-12) throw ConditioningError("w has no component along the Perron direction");
    w /= w1;  // normalize so the Perron coefficient is 1
    coeffs /= w1;

    const Eigen::RowVectorXcd u1 = eig.l.row(eig.perron);
    const Eigen::RowVectorXcd alphas = u1 * blocks.x.cast<std::complex<double>>() * eig.r;
    std::complex<double> q = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) q += coeffs(i) * alphas(i);
    result.q = q.real();

    const Eigen::MatrixXcd p = reduced_reversal(blocks, index).cast<std::complex<double>>();
    const std::complex<double> correction =
        (eig.l.row(eig.perron) * p * eig.r * w)(0, 0);
    result.correction = correction.real();
    result.holds = result.q <= result.x_degree * result.correction + 1e-8;
    return result;
}

double hausdorff_distance(std::span<const std::complex<double>> a,
                          std::span<const std::complex<double>> b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& za : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& zb : b) best = std::min(best, std::abs(za - zb));
        worst = std::max(worst, best);
    }
    for (const auto& zb : b) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& za : a) best = std::min(best, std::abs(za - zb));
        worst = std::max(worst, best);
    }
    return worst;
}

bool one_shell_invariance_check(const Graph& g, NodeId c, int cap, double zero_tol) {
    const CoreLabels cores = k_core_decomposition(g);
    if (c < 0 || c >= g.num_nodes()) throw std::out_of_range("node id out of range");
    if (cores.core_index[static_cast<std::size_t>(c)] != 1)
        throw std::invalid_argument("node is not in the 1-shell");

    DirectedEdgeIndex index(g);
    require_cap(index, cap);
    const Graph removed = remove_node(g, c);
    DirectedEdgeIndex index_removed(removed);

    auto nonzero = [zero_tol](const Eigen::VectorXcd& eigs) {
        std::vector<std::complex<double>> out;
        for (Eigen::Index i = 0; i < eigs.size(); ++i)
            if (std::abs(eigs(i)) > zero_tol) out.push_back(eigs(i));
        return out;
    };
    const auto before = nonzero(dense_eigenvalues(dense_nb_matrix(g, index, cap)));
    const auto after = nonzero(dense_eigenvalues(dense_nb_matrix(removed, index_removed, cap)));
    return hausdorff_distance(before, after) < 1e-8;
}

}  // namespace nbx::oracle
