#include "ars/rank_scores.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ars/errors.hpp"

namespace ars {

namespace {

// Tolerances apply to normalized data: design columns and the response are
// scaled to unit max-abs before the solve and unscaled on output.
constexpr double kPivTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr double kNodeGuard = 1e-7;
constexpr double kZeroAdvance = 1e-13;
constexpr double kEndSnap = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status : unsigned char { Basic, Lower, Upper };

// The LP in scaled form: maximize cost'a subject to a_cols * a = (1-alpha) g,
// 0 <= a <= 1. Column t of a_cols is the t-th design row.
struct Problem {
    Eigen::MatrixXd a_cols;     // m x n
    Eigen::VectorXd cost;       // n
    Eigen::VectorXd g;          // a_cols * 1
    Eigen::VectorXd col_scale;  // m design-column scales
    double y_scale = 1.0;
    Eigen::Index m = 0;
    Eigen::Index n = 0;
};

struct State {
    std::vector<Status> status;       // n real variables
    std::vector<Eigen::Index> basis;  // m entries; >= n means artificial
};

Problem make_problem(const AutoregressionDesign& design) {
    const Eigen::Index n = design.response.size();
    const Eigen::Index m = design.p + 1;
    if (design.design.rows() != n || design.design.cols() != m) {
        throw DataError("rank_scores: design is " + std::to_string(design.design.rows()) +
                        "x" + std::to_string(design.design.cols()) + ", expected " +
                        std::to_string(n) + "x" + std::to_string(m));
    }
    if (n < m + 1) {
        throw DataError("rank_scores: need at least p+2 observations, got n = " +
                        std::to_string(n));
    }
    if (!design.design.allFinite() || !design.response.allFinite()) {
        throw DataError("rank_scores: non-finite entries in design or response");
    }

    Problem pb;
    pb.m = m;
    pb.n = n;
    pb.col_scale.resize(m);
    pb.a_cols.resize(m, n);
    for (Eigen::Index j = 0; j < m; ++j) {
        double s = design.design.col(j).cwiseAbs().maxCoeff();
        pb.col_scale[j] = s > 0.0 ? s : 1.0;
        pb.a_cols.row(j) = design.design.col(j).transpose() / pb.col_scale[j];
    }
    double ys = design.response.cwiseAbs().maxCoeff();
    pb.y_scale = ys > 0.0 ? ys : 1.0;
    pb.cost = design.response / pb.y_scale;
    pb.g = pb.a_cols.rowwise().sum();
    return pb;
}

Eigen::MatrixXd basis_matrix(const Problem& pb, const std::vector<Eigen::Index>& basis,
                             const Eigen::VectorXd& art_sign) {
    Eigen::MatrixXd b(pb.m, pb.m);
    for (Eigen::Index i = 0; i < pb.m; ++i) {
        const Eigen::Index j = basis[static_cast<std::size_t>(i)];
        if (j < pb.n) {
            b.col(i) = pb.a_cols.col(j);
        } else {
            b.col(i).setZero();
            b(j - pb.n, i) = art_sign[j - pb.n];
        }
    }
    return b;
}

Eigen::VectorXd upper_sum(const Problem& pb, const State& st) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(pb.m);
    for (Eigen::Index j = 0; j < pb.n; ++j) {
        if (st.status[static_cast<std::size_t>(j)] == Status::Upper) h += pb.a_cols.col(j);
    }
    return h;
}

std::vector<Eigen::Index> sorted_basis(const State& st) {
    std::vector<Eigen::Index> b = st.basis;
    std::sort(b.begin(), b.end());
    return b;
}

// Two-phase bounded-variable primal simplex, Bland's rule throughout.
State cold_solve(const Problem& pb, double alpha) {
    const Eigen::Index n = pb.n;
    const Eigen::Index m = pb.m;
    const Eigen::VectorXd rhs = (1.0 - alpha) * pb.g;

    State st;
    st.status.assign(static_cast<std::size_t>(n), Status::Lower);
    st.basis.resize(static_cast<std::size_t>(m));
    Eigen::VectorXd art_sign(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        art_sign[i] = rhs[i] >= 0.0 ? 1.0 : -1.0;
        st.basis[static_cast<std::size_t>(i)] = n + i;
    }

    const long iter_cap = 400 + 120 * static_cast<long>(n + m);
    for (int phase = 1; phase <= 2; ++phase) {
        auto cost_of = [&](Eigen::Index j) -> double {
            if (phase == 1) return j < n ? 0.0 : -1.0;
            return pb.cost[j];
        };

        Eigen::PartialPivLU<Eigen::MatrixXd> lu;
        for (long iter = 0;; ++iter) {
            if (iter > iter_cap) {
                throw SolverError("solve_rank_scores_at: simplex iteration limit (" +
                                  std::to_string(iter_cap) + ") exhausted at alpha = " +
                                  std::to_string(alpha));
            }
            lu.compute(basis_matrix(pb, st.basis, art_sign));
            Eigen::VectorXd xb = lu.solve(rhs - upper_sum(pb, st));
            Eigen::VectorXd cb(m);
            for (Eigen::Index i = 0; i < m; ++i) cb[i] = cost_of(st.basis[static_cast<std::size_t>(i)]);
            Eigen::VectorXd pi = lu.transpose().solve(cb);

            // Entering variable: smallest index whose reduced cost improves.
            Eigen::Index enter = -1;
            double sgn = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                const Status sj = st.status[static_cast<std::size_t>(j)];
                if (sj == Status::Basic) continue;
                const double dj = cost_of(j) - pi.dot(pb.a_cols.col(j));
                if (sj == Status::Lower && dj > kDualTol) {
                    enter = j;
                    sgn = 1.0;
                    break;
                }
                if (sj == Status::Upper && dj < -kDualTol) {
                    enter = j;
                    sgn = -1.0;
                    break;
                }
            }
            if (enter < 0) break;  // phase optimal

            const Eigen::VectorXd w = lu.solve(pb.a_cols.col(enter));

            // Ratio test: entering moves by t, basics move by -sgn*t*w.
            double t_block = kInf;
            Eigen::Index blk = -1;
            int blk_bound = 0;
            for (Eigen::Index i = 0; i < m; ++i) {
                const Eigen::Index bj = st.basis[static_cast<std::size_t>(i)];
                const double delta = -sgn * w[i];
                double t;
                int bound;
                if (delta < -kPivTol) {
                    t = xb[i] / (-delta);
                    bound = 0;
                } else if (delta > kPivTol && bj < n) {
                    t = (1.0 - xb[i]) / delta;
                    bound = 1;
                } else {
                    continue;
                }
                t = std::max(t, 0.0);
                const bool better =
                    t < t_block - 1e-12 ||
                    (t < t_block + 1e-12 && blk >= 0 &&
                     bj < st.basis[static_cast<std::size_t>(blk)]);
                if (blk < 0 || better) {
                    t_block = t;
                    blk = i;
                    blk_bound = bound;
                }
            }

            // When blocking coincides with the entering bound flip, pivot.
            if (blk < 0 || t_block > 1.0 + 1e-12) {
                // Bound flip: the entering variable crosses to its other bound.
                st.status[static_cast<std::size_t>(enter)] =
                    sgn > 0.0 ? Status::Upper : Status::Lower;
                continue;
            }
            const Eigen::Index leave = st.basis[static_cast<std::size_t>(blk)];
            if (leave < n) {
                st.status[static_cast<std::size_t>(leave)] =
                    blk_bound == 0 ? Status::Lower : Status::Upper;
            }
            st.basis[static_cast<std::size_t>(blk)] = enter;
            st.status[static_cast<std::size_t>(enter)] = Status::Basic;
        }

        if (phase == 1) {
            lu.compute(basis_matrix(pb, st.basis, art_sign));
            Eigen::VectorXd xb = lu.solve(rhs - upper_sum(pb, st));
            double infeas = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                if (st.basis[static_cast<std::size_t>(i)] >= n) infeas += std::fabs(xb[i]);
            }
            if (infeas > 1e-7 * static_cast<double>(m)) {
                throw SingularDesignError(
                    "solve_rank_scores_at: phase 1 ended infeasible; the design is "
                    "numerically rank deficient");
            }
            // Swap out artificials stuck in the basis at value zero.
            for (Eigen::Index i = 0; i < m; ++i) {
                if (st.basis[static_cast<std::size_t>(i)] < n) continue;
                Eigen::VectorXd ei = Eigen::VectorXd::Zero(m);
                ei[i] = 1.0;
                const Eigen::VectorXd z = lu.transpose().solve(ei);
                Eigen::Index repl = -1;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (st.status[static_cast<std::size_t>(j)] == Status::Basic) continue;
                    if (std::fabs(z.dot(pb.a_cols.col(j))) > kPivTol) {
                        repl = j;
                        break;
                    }
                }
                if (repl < 0) {
                    throw SingularDesignError(
                        "solve_rank_scores_at: design row space is rank deficient");
                }
                st.basis[static_cast<std::size_t>(i)] = repl;
                st.status[static_cast<std::size_t>(repl)] = Status::Basic;
                lu.compute(basis_matrix(pb, st.basis, art_sign));
            }
        }
    }
    return st;
}

// Basic values as an affine function of alpha: a_B(alpha) = u - alpha * v.
struct AffineBasics {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::VectorXd u;
    Eigen::VectorXd v;
};

AffineBasics affine_basics(const Problem& pb, const State& st) {
    AffineBasics ab;
    ab.lu.compute(basis_matrix(pb, st.basis, Eigen::VectorXd::Zero(pb.m)));
    ab.u = ab.lu.solve(pb.g - upper_sum(pb, st));
    ab.v = ab.lu.solve(pb.g);
    return ab;
}

Eigen::VectorXd assemble_values(const Problem& pb, const State& st, const AffineBasics& ab,
                                double alpha, double guard) {
    Eigen::VectorXd values(pb.n);
    for (Eigen::Index j = 0; j < pb.n; ++j) {
        const Status sj = st.status[static_cast<std::size_t>(j)];
        values[j] = sj == Status::Upper ? 1.0 : 0.0;
    }
    for (Eigen::Index i = 0; i < pb.m; ++i) {
        const Eigen::Index bj = st.basis[static_cast<std::size_t>(i)];
        double val = ab.u[i] - alpha * ab.v[i];
        if (val < -guard || val > 1.0 + guard) {
            throw SolverError("rank_scores: basic value " + std::to_string(val) +
                              " escapes [0,1] at alpha = " + std::to_string(alpha));
        }
        values[bj] = std::min(1.0, std::max(0.0, val));
    }
    return values;
}

void verify_feasible(const Problem& pb, const Eigen::VectorXd& values, double alpha) {
    const Eigen::VectorXd resid =
        pb.a_cols * (values.array() - (1.0 - alpha)).matrix();
    if (resid.cwiseAbs().maxCoeff() > kFeasTol) {
        throw SolverError("rank_scores: feasibility residual " +
                          std::to_string(resid.cwiseAbs().maxCoeff()) + " at alpha = " +
                          std::to_string(alpha));
    }
}

std::vector<Eigen::Index> first_independent_rows(const AutoregressionDesign& design) {
    const Eigen::Index m = design.p + 1;
    std::vector<Eigen::Index> rows;
    Eigen::MatrixXd sel(m, m);
    for (Eigen::Index t = 0; t < design.n() && static_cast<Eigen::Index>(rows.size()) < m; ++t) {
        const auto k = static_cast<Eigen::Index>(rows.size());
        sel.row(k) = design.design.row(t);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sel.topRows(k + 1).transpose());
        qr.setThreshold(1e-10);
        if (qr.rank() == k + 1) rows.push_back(t);
    }
    if (static_cast<Eigen::Index>(rows.size()) < m) {
        throw SingularDesignError("rank_scores: design has no p+1 independent rows");
    }
    return rows;
}

struct MarchResult {
    std::vector<double> alphas;                      // in march order
    std::vector<Eigen::VectorXd> nodes;              // aligned with alphas
    std::vector<std::vector<Eigen::Index>> bases;    // basis adjacent toward the start
    std::vector<Eigen::Index> settled_basis;         // basis on the first segment
};

// One dual pivot: the basic variable in row `blk` leaves to `blk_bound`;
// the entering column restores dual feasibility; ties break on the smaller
// column index so the (ratio, index) order is lexicographic.
void dual_pivot(const Problem& pb, State& st, const AffineBasics& ab, Eigen::Index blk,
                int blk_bound, double alpha) {
    const Eigen::Index n = pb.n;
    const Eigen::Index m = pb.m;
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(m);
    ei[blk] = 1.0;
    const Eigen::VectorXd z = ab.lu.transpose().solve(ei);
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb[i] = pb.cost[st.basis[static_cast<std::size_t>(i)]];
    const Eigen::VectorXd pi = ab.lu.transpose().solve(cb);

    Eigen::Index enter = -1;
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Status sj = st.status[static_cast<std::size_t>(j)];
        if (sj == Status::Basic) continue;
        const double wj = z.dot(pb.a_cols.col(j));
        bool eligible;
        if (blk_bound == 0) {
            eligible = (sj == Status::Lower && wj < -kPivTol) ||
                       (sj == Status::Upper && wj > kPivTol);
        } else {
            eligible = (sj == Status::Lower && wj > kPivTol) ||
                       (sj == Status::Upper && wj < -kPivTol);
        }
        if (!eligible) continue;
        const double dj = pb.cost[j] - pi.dot(pb.a_cols.col(j));
        double ratio = dj / wj;
        ratio = blk_bound == 0 ? std::max(ratio, 0.0) : std::min(ratio, 0.0);
        const bool improves = blk_bound == 0 ? ratio < best - 1e-12 : ratio > best + 1e-12;
        if (enter < 0 || improves) {
            enter = j;
            best = ratio;
        }
    }
    if (enter < 0) {
        throw SolverError("solve_rank_score_path: no admissible entering column at alpha = " +
                          std::to_string(alpha) + " (degenerate pivot resolution failed)");
    }
    const Eigen::Index leave = st.basis[static_cast<std::size_t>(blk)];
    st.status[static_cast<std::size_t>(leave)] = blk_bound == 0 ? Status::Lower : Status::Upper;
    st.basis[static_cast<std::size_t>(blk)] = enter;
    st.status[static_cast<std::size_t>(enter)] = Status::Basic;
}

MarchResult march(const Problem& pb, State st, double alpha0, int dir,
                  Eigen::Index breakpoint_cap, long* pivot_budget) {
    MarchResult rec;
    const Eigen::Index m = pb.m;
    const double endpoint = dir > 0 ? 1.0 : 0.0;
    double alpha = alpha0;
    long stall = 0;
    const long stall_cap = 4 * static_cast<long>(pb.n + m) + 64;

    while (true) {
        if (--(*pivot_budget) < 0) {
            throw SolverError("solve_rank_score_path: pivot budget exhausted; "
                              "fall back to per-alpha grid solves");
        }
        const AffineBasics ab = affine_basics(pb, st);

        // Distance to the next basic-variable bound event in this direction.
        double eps_best = kInf;
        Eigen::Index blk = -1;
        int blk_bound = 0;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double rate = -dir * ab.v[i];
            const double val = ab.u[i] - alpha * ab.v[i];
            double eps;
            int bound;
            if (rate < -kPivTol) {
                eps = val / (-rate);
                bound = 0;
            } else if (rate > kPivTol) {
                eps = (1.0 - val) / rate;
                bound = 1;
            } else {
                continue;
            }
            eps = std::max(eps, 0.0);
            const Eigen::Index bj = st.basis[static_cast<std::size_t>(i)];
            const bool better =
                eps < eps_best - 1e-14 ||
                (eps < eps_best + 1e-14 && blk >= 0 &&
                 bj < st.basis[static_cast<std::size_t>(blk)]);
            if (blk < 0 || better) {
                eps_best = eps;
                blk = i;
                blk_bound = bound;
            }
        }

        if (rec.settled_basis.empty() && (blk < 0 || eps_best > kZeroAdvance)) {
            rec.settled_basis = sorted_basis(st);
        }

        double alpha_next = blk < 0 ? endpoint : alpha + dir * eps_best;
        alpha_next = std::min(1.0, std::max(0.0, alpha_next));
        const bool at_end = dir > 0 ? alpha_next >= 1.0 - kEndSnap : alpha_next <= kEndSnap;

        if (at_end) {
            // The path can only terminate once every nonbasic variable sits on
            // the bound the endpoint forces (all at 1 when alpha=0, all at 0
            // when alpha=1).
            bool side_clean = true;
            for (Eigen::Index j = 0; j < pb.n && side_clean; ++j) {
                const Status sj = st.status[static_cast<std::size_t>(j)];
                if (dir > 0 && sj == Status::Upper) side_clean = false;
                if (dir < 0 && sj == Status::Lower) side_clean = false;
            }
            if (side_clean) {
                const double target = dir > 0 ? 0.0 : 1.0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double val_end = ab.u[i] - endpoint * ab.v[i];
                    if (std::fabs(val_end - target) > 1e-6) {
                        throw SolverError("solve_rank_score_path: endpoint value " +
                                          std::to_string(val_end) + " != " +
                                          std::to_string(target));
                    }
                }
                // Crowded events within the snap window merge into the endpoint.
                if (!rec.alphas.empty() &&
                    std::fabs(rec.alphas.back() - endpoint) < 1e-12) {
                    rec.alphas.pop_back();
                    rec.nodes.pop_back();
                    rec.bases.pop_back();
                }
                rec.alphas.push_back(endpoint);
                rec.nodes.push_back(dir > 0 ? Eigen::VectorXd::Zero(pb.n)
                                            : Eigen::VectorXd::Ones(pb.n));
                rec.bases.push_back(sorted_basis(st));
                break;
            }
            if (blk < 0) {
                throw SolverError("solve_rank_score_path: inconsistent endpoint state");
            }
            // Events crowd the endpoint: pivot through without recording.
        }

        const double last_ref = rec.alphas.empty() ? alpha0 : rec.alphas.back();
        const bool advanced = std::fabs(alpha_next - last_ref) > kZeroAdvance;
        if (advanced && !at_end) {
            if (static_cast<Eigen::Index>(rec.alphas.size()) >= breakpoint_cap) {
                throw SolverError(
                    "solve_rank_score_path: breakpoint cap " +
                    std::to_string(breakpoint_cap) +
                    " exceeded; fall back to per-alpha grid solves");
            }
            Eigen::VectorXd node = assemble_values(pb, st, ab, alpha_next, kNodeGuard);
            verify_feasible(pb, node, alpha_next);
            rec.alphas.push_back(alpha_next);
            rec.nodes.push_back(std::move(node));
            rec.bases.push_back(sorted_basis(st));
            stall = 0;
        } else {
            if (++stall > stall_cap) {
                throw SolverError(
                    "solve_rank_score_path: degenerate pivot cycle detected at alpha = " +
                    std::to_string(alpha_next));
            }
        }

        dual_pivot(pb, st, ab, blk, blk_bound, alpha_next);
        alpha = alpha_next;
    }
    return rec;
}

}  // namespace

RankScoreVector solve_rank_scores_at(const AutoregressionDesign& design, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("solve_rank_scores_at: alpha must lie in [0,1]");
    }
    const Problem pb = make_problem(design);

    RankScoreVector out;
    out.alpha = alpha;
    // The centering row forces the exact boundary solutions; return them
    // directly with a deterministic reference basis.
    if (alpha == 0.0 || alpha == 1.0) {
        out.values = alpha == 0.0 ? Eigen::VectorXd::Ones(pb.n) : Eigen::VectorXd::Zero(pb.n);
        out.basis = first_independent_rows(design);
        return out;
    }

    const State st = cold_solve(pb, alpha);
    const AffineBasics ab = affine_basics(pb, st);
    out.values = assemble_values(pb, st, ab, alpha, kNodeGuard);
    verify_feasible(pb, out.values, alpha);
    out.basis = sorted_basis(st);
    return out;
}

RankScorePath solve_rank_score_path(const AutoregressionDesign& design,
                                    Eigen::Index breakpoint_cap) {
    const Problem pb = make_problem(design);
    if (breakpoint_cap <= 0) breakpoint_cap = 50 * pb.n * pb.m;

    const double alpha0 = 0.5;
    const State anchor = cold_solve(pb, alpha0);
    long pivot_budget = 6 * static_cast<long>(breakpoint_cap) + 5000;

    const MarchResult up = march(pb, anchor, alpha0, +1, breakpoint_cap, &pivot_budget);
    const MarchResult down = march(pb, anchor, alpha0, -1, breakpoint_cap, &pivot_budget);

    // The anchor is itself a breakpoint exactly when the two marches settle
    // into different bases there.
    const bool mid_break = up.settled_basis != down.settled_basis;

    const auto l = static_cast<Eigen::Index>(down.alphas.size());
    const auto r = static_cast<Eigen::Index>(up.alphas.size());
    const Eigen::Index count = l + r + (mid_break ? 1 : 0);

    RankScorePath path;
    path.breakpoints.resize(count);
    path.node_values.resize(pb.n, count);
    path.bases.reserve(static_cast<std::size_t>(count - 1));

    Eigen::Index k = 0;
    for (Eigen::Index i = l - 1; i >= 0; --i, ++k) {
        path.breakpoints[k] = down.alphas[static_cast<std::size_t>(i)];
        path.node_values.col(k) = down.nodes[static_cast<std::size_t>(i)];
    }
    if (mid_break) {
        const AffineBasics ab = affine_basics(pb, anchor);
        path.breakpoints[k] = alpha0;
        path.node_values.col(k) = assemble_values(pb, anchor, ab, alpha0, kNodeGuard);
        ++k;
    }
    for (Eigen::Index j = 0; j < r; ++j, ++k) {
        path.breakpoints[k] = up.alphas[static_cast<std::size_t>(j)];
        path.node_values.col(k) = up.nodes[static_cast<std::size_t>(j)];
    }

    // Segment bases, ascending. down.bases[i] is the basis just above the
    // node it was recorded with; up.bases[j] the basis just below.
    for (Eigen::Index i = l - 1; i >= 1; --i) {
        path.bases.push_back(down.bases[static_cast<std::size_t>(i)]);
    }
    path.bases.push_back(down.settled_basis);
    if (mid_break) path.bases.push_back(up.settled_basis);
    for (Eigen::Index j = 1; j < r; ++j) {
        path.bases.push_back(up.bases[static_cast<std::size_t>(j)]);
    }

    // Structural sanity before handing the path out.
    if (path.breakpoints[0] != 0.0 || path.breakpoints[count - 1] != 1.0) {
        throw SolverError("solve_rank_score_path: endpoints missing from the path");
    }
    for (Eigen::Index i = 0; i + 1 < count; ++i) {
        if (!(path.breakpoints[i] < path.breakpoints[i + 1])) {
            throw SolverError("solve_rank_score_path: breakpoints not increasing");
        }
    }
    if (static_cast<Eigen::Index>(path.bases.size()) != count - 1) {
        throw SolverError("solve_rank_score_path: segment basis bookkeeping mismatch");
    }
    return path;
}

QuantileFit solve_quantile_fit(const AutoregressionDesign& design, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("solve_quantile_fit: alpha must lie in (0,1)");
    }
    const Problem pb = make_problem(design);
    const State st = cold_solve(pb, alpha);
    const AffineBasics ab = affine_basics(pb, st);

    Eigen::VectorXd cb(pb.m);
    for (Eigen::Index i = 0; i < pb.m; ++i) cb[i] = pb.cost[st.basis[static_cast<std::size_t>(i)]];
    const Eigen::VectorXd pi = ab.lu.transpose().solve(cb);

    QuantileFit fit;
    fit.alpha = alpha;
    fit.coefficients.resize(pb.m);
    for (Eigen::Index kcoef = 0; kcoef < pb.m; ++kcoef) {
        fit.coefficients[kcoef] = pb.y_scale * pi[kcoef] / pb.col_scale[kcoef];
    }
    fit.residuals = design.response - design.design * fit.coefficients;
    return fit;
}

Eigen::VectorXd rank_scores_at(const RankScorePath& path, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("rank_scores_at: alpha must lie in [0,1]");
    }
    const auto& bp = path.breakpoints;
    const Eigen::Index count = bp.size();
    Eigen::Index hi = 1;
    while (hi < count - 1 && bp[hi] < alpha) ++hi;
    const Eigen::Index lo = hi - 1;
    const double width = bp[hi] - bp[lo];
    const double w = width > 0.0 ? (alpha - bp[lo]) / width : 0.0;
    return (1.0 - w) * path.node_values.col(lo) + w * path.node_values.col(hi);
}

double rank_score_objective(const AutoregressionDesign& design,
                            const Eigen::VectorXd& values) {
    return design.response.dot(values);
}

double quantile_objective(double alpha, const Eigen::VectorXd& residuals) {
    double obj = 0.0;
    for (Eigen::Index t = 0; t < residuals.size(); ++t) {
        const double u = residuals[t];
        obj += u * (alpha - (u < 0.0 ? 1.0 : 0.0));
    }
    return obj;
}

}  // namespace ars
