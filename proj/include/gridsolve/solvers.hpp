#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gridsolve/assembly.hpp"
#include "gridsolve/errors.hpp"
#include "gridsolve/sparse.hpp"

namespace gridsolve {

enum class SolverAlgo { Jacobi, GaussSeidel, Ssor, ConjugateGradient };

inline const char* to_string(SolverAlgo a) {
    switch (a) {
        case SolverAlgo::Jacobi: return "jacobi";
        case SolverAlgo::GaussSeidel: return "gauss_seidel";
        case SolverAlgo::Ssor: return "ssor";
        case SolverAlgo::ConjugateGradient: return "cg";
    }
    return "?";
}

/// Solver selector; omega is meaningful for SSOR only and must lie in (0, 2).
struct SolverKind {
    SolverAlgo algo = SolverAlgo::ConjugateGradient;
    double omega = 1.5;

    bool operator==(const SolverKind&) const = default;
};

/// Iteration budget and stopping/recording policy for one solver run.
struct RunSettings {
    int max_iterations = 100;
    double tolerance = 1e-10;        // absolute 2-norm of the normal-system residual
    int snapshot_stride = 1;
    std::vector<double> initial_guess;              // empty means all-zero
    std::optional<std::vector<int>> snapshot_iterations;  // strictly increasing when set

    bool operator==(const RunSettings&) const = default;
};

/// Time-ordered record of one solver run. Snapshot 0 is always the initial
/// guess; residual norms are recorded at every iteration regardless of the
/// snapshot stride.
struct SolveTrace {
    SolverKind solver;
    std::vector<std::pair<int, std::vector<double>>> snapshots;
    std::vector<std::pair<int, double>> residual_norms;
    int iterations_run = 0;
    std::optional<int> converged_at;
    bool breakdown = false;   // CG only: p^T M p <= 0 stopped the run
    bool diverged = false;    // residual became non-finite
};

/// ||rhs - M x||_2.
inline double residual_norm(const NormalSystem& sys, std::span<const double> x) {
    if (static_cast<int>(x.size()) != sys.order())
        throw DomainError("residual_norm: vector length " + std::to_string(x.size()) +
                          " != system order " + std::to_string(sys.order()));
    const std::vector<double> mx = sys.M.multiply(x);
    double s = 0.0;
    for (size_t i = 0; i < mx.size(); ++i) {
        const double d = sys.rhs[i] - mx[i];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace detail {

inline void validate_settings(const RunSettings& s, int order) {
    if (s.max_iterations < 1)
        throw DomainError("max_iterations must be >= 1, got " +
                          std::to_string(s.max_iterations));
    if (s.tolerance < 0.0) throw DomainError("tolerance must be >= 0");
    if (s.snapshot_stride < 1)
        throw DomainError("snapshot_stride must be >= 1, got " +
                          std::to_string(s.snapshot_stride));
    if (!s.initial_guess.empty() && static_cast<int>(s.initial_guess.size()) != order)
        throw DomainError("initial guess length " + std::to_string(s.initial_guess.size()) +
                          " != system order " + std::to_string(order));
}

inline std::vector<double> initial_vector(const RunSettings& s, int order) {
    if (s.initial_guess.empty()) return std::vector<double>(static_cast<size_t>(order), 0.0);
    return s.initial_guess;
}

inline std::vector<double> diagonal_of(const NormalSystem& sys) {
    const int N = sys.order();
    std::vector<double> diag(static_cast<size_t>(N));
    for (int v = 0; v < N; ++v) {
        const double d = sys.M.at(v, v);
        if (d == 0.0)
            throw DomainError("zero diagonal entry at vertex " + std::to_string(v));
        diag[static_cast<size_t>(v)] = d;
    }
    return diag;
}

/// Shared per-iteration bookkeeping: residual history, snapshot schedule,
/// convergence and non-finite stopping.
class TraceRecorder {
public:
    TraceRecorder(const NormalSystem& sys, const RunSettings& settings, SolverKind solver,
                  const std::vector<double>& x0)
        : sys_(sys), settings_(settings) {
        trace_.solver = solver;
        trace_.snapshots.emplace_back(0, x0);
        const double r0 = residual_norm(sys_, x0);
        trace_.residual_norms.emplace_back(0, r0);
        if (r0 <= settings_.tolerance) trace_.converged_at = 0;
        stopped_ = trace_.converged_at.has_value() || !std::isfinite(r0);
        if (!std::isfinite(r0)) trace_.diverged = true;
    }

    bool stopped() const { return stopped_; }

    /// Records iteration k; returns false when the run should stop.
    bool record(int k, const std::vector<double>& x) {
        const double r = residual_norm(sys_, x);
        trace_.residual_norms.emplace_back(k, r);
        trace_.iterations_run = k;
        bool stop = false;
        if (!std::isfinite(r)) {
            trace_.diverged = true;
            stop = true;
        } else if (r <= settings_.tolerance) {
            trace_.converged_at = k;
            stop = true;
        }
        if (wants_snapshot(k) || stop || k == settings_.max_iterations)
            trace_.snapshots.emplace_back(k, x);
        stopped_ = stop;
        return !stop;
    }

    SolveTrace take() { return std::move(trace_); }

    SolveTrace& trace() { return trace_; }

private:
    bool wants_snapshot(int k) const {
        if (settings_.snapshot_iterations)
            return std::binary_search(settings_.snapshot_iterations->begin(),
                                      settings_.snapshot_iterations->end(), k);
        return k % settings_.snapshot_stride == 0;
    }

    const NormalSystem& sys_;
    const RunSettings& settings_;
    SolveTrace trace_;
    bool stopped_ = false;
};

inline double gauss_seidel_update(const NormalSystem& sys, std::span<const double> diag,
                                  std::span<const double> x, int v) {
    double s = sys.rhs[static_cast<size_t>(v)];
    for (const auto& e : sys.M.row(v))
        if (e.col != v) s -= e.value * x[static_cast<size_t>(e.col)];
    return s / diag[static_cast<size_t>(v)];
}

}  // namespace detail

/// Jacobi iteration: every component is updated from the previous iterate.
inline SolveTrace jacobi_solve(const NormalSystem& sys, const RunSettings& settings) {
    detail::validate_settings(settings, sys.order());
    const std::vector<double> diag = detail::diagonal_of(sys);
    std::vector<double> x = detail::initial_vector(settings, sys.order());
    detail::TraceRecorder rec(sys, settings, {SolverAlgo::Jacobi}, x);
    std::vector<double> next(x.size());
    for (int k = 1; k <= settings.max_iterations && !rec.stopped(); ++k) {
        for (int v = 0; v < sys.order(); ++v)
            next[static_cast<size_t>(v)] = detail::gauss_seidel_update(sys, diag, x, v);
        x.swap(next);
        if (!rec.record(k, x)) break;
    }
    return rec.take();
}

/// Gauss-Seidel: one forward sweep in ascending vertex order per iteration,
/// using already-updated values within the sweep.
inline SolveTrace gauss_seidel_solve(const NormalSystem& sys, const RunSettings& settings) {
    detail::validate_settings(settings, sys.order());
    const std::vector<double> diag = detail::diagonal_of(sys);
    std::vector<double> x = detail::initial_vector(settings, sys.order());
    detail::TraceRecorder rec(sys, settings, {SolverAlgo::GaussSeidel}, x);
    for (int k = 1; k <= settings.max_iterations && !rec.stopped(); ++k) {
        for (int v = 0; v < sys.order(); ++v)
            x[static_cast<size_t>(v)] = detail::gauss_seidel_update(sys, diag, x, v);
        if (!rec.record(k, x)) break;
    }
    return rec.take();
}

/// SSOR: one forward SOR sweep followed by one backward SOR sweep counts as
/// a single iteration.
inline SolveTrace ssor_solve(const NormalSystem& sys, const RunSettings& settings,
                             double omega) {
    if (!(omega > 0.0 && omega < 2.0))
        throw DomainError("SSOR relaxation factor must lie in (0, 2), got " +
                          std::to_string(omega));
    detail::validate_settings(settings, sys.order());
    const std::vector<double> diag = detail::diagonal_of(sys);
    std::vector<double> x = detail::initial_vector(settings, sys.order());
    detail::TraceRecorder rec(sys, settings, {SolverAlgo::Ssor, omega}, x);
    for (int k = 1; k <= settings.max_iterations && !rec.stopped(); ++k) {
        for (int v = 0; v < sys.order(); ++v) {
            const double gs = detail::gauss_seidel_update(sys, diag, x, v);
            x[static_cast<size_t>(v)] = (1.0 - omega) * x[static_cast<size_t>(v)] + omega * gs;
        }
        for (int v = sys.order() - 1; v >= 0; --v) {
            const double gs = detail::gauss_seidel_update(sys, diag, x, v);
            x[static_cast<size_t>(v)] = (1.0 - omega) * x[static_cast<size_t>(v)] + omega * gs;
        }
        if (!rec.record(k, x)) break;
    }
    return rec.take();
}

/// Conjugate gradient on a symmetric system. Stops early with the breakdown
/// flag when p^T M p <= 0 (loss of positive definiteness); the partial trace
/// is returned.
inline SolveTrace cg_solve(const NormalSystem& sys, const RunSettings& settings) {
    detail::validate_settings(settings, sys.order());
    if (!sys.M.is_structurally_symmetric())
        throw DomainError("conjugate gradient requires a symmetric matrix");
    std::vector<double> x = detail::initial_vector(settings, sys.order());
    detail::TraceRecorder rec(sys, settings, {SolverAlgo::ConjugateGradient}, x);

    const size_t N = x.size();
    std::vector<double> r(N);
    {
        const std::vector<double> mx = sys.M.multiply(x);
        for (size_t i = 0; i < N; ++i) r[i] = sys.rhs[i] - mx[i];
    }
    std::vector<double> p = r;
    double rr = 0.0;
    for (size_t i = 0; i < N; ++i) rr += r[i] * r[i];

    for (int k = 1; k <= settings.max_iterations && !rec.stopped(); ++k) {
        if (rr == 0.0) break;  // exact solution reached
        const std::vector<double> mp = sys.M.multiply(p);
        double pmp = 0.0;
        for (size_t i = 0; i < N; ++i) pmp += p[i] * mp[i];
        if (pmp <= 0.0) {
            rec.trace().breakdown = true;
            break;
        }
        const double alpha = rr / pmp;
        for (size_t i = 0; i < N; ++i) x[i] += alpha * p[i];
        for (size_t i = 0; i < N; ++i) r[i] -= alpha * mp[i];
        double rr_new = 0.0;
        for (size_t i = 0; i < N; ++i) rr_new += r[i] * r[i];
        const double beta = rr_new / rr;
        for (size_t i = 0; i < N; ++i) p[i] = r[i] + beta * p[i];
        rr = rr_new;
        if (!rec.record(k, x)) break;
    }
    return rec.take();
}

/// Dispatch on SolverKind.
inline SolveTrace solve(const NormalSystem& sys, SolverKind kind, const RunSettings& settings) {
    switch (kind.algo) {
        case SolverAlgo::Jacobi: return jacobi_solve(sys, settings);
        case SolverAlgo::GaussSeidel: return gauss_seidel_solve(sys, settings);
        case SolverAlgo::Ssor: return ssor_solve(sys, settings, kind.omega);
        case SolverAlgo::ConjugateGradient: return cg_solve(sys, settings);
    }
    throw DomainError("unknown solver");
}

}  // namespace gridsolve
