#pragma once

#include <vector>

#include "sev/state.hpp"

namespace sev {

/**
 * Piecewise control law over a time span.
 *
 * Each piece holds a constant evader control and an affine pursuer heading
 * u_p(t) = up0 + up_rate * (t - t_begin). That covers every closed-form law
 * used by the synthesis (constant controls and linearly rotating headings),
 * and keeps u_p unwrapped so the schedule has no artificial jumps inside a
 * piece.
 */
class PiecewiseControls {
  public:
    struct Piece {
        double t_begin = 0.0;
        double u_e = 0.0;
        double up0 = 0.0;
        double up_rate = 0.0;
    };

    PiecewiseControls() = default;

    void add_piece(double t_begin, double u_e, double up0, double up_rate = 0.0) {
        pieces_.push_back({t_begin, u_e, up0, up_rate});
    }

    static PiecewiseControls constant(double u_e, double u_p) {
        PiecewiseControls s;
        s.add_piece(0.0, u_e, u_p);
        return s;
    }

    bool empty() const { return pieces_.empty(); }
    const std::vector<Piece>& pieces() const { return pieces_; }

    Controls operator()(double t) const {
        const Piece* p = &pieces_.front();
        for (const Piece& q : pieces_) {
            if (q.t_begin <= t) p = &q;
            else break;
        }
        return {p->u_e, p->up0 + p->up_rate * (t - p->t_begin)};
    }

    /// Piece breakpoints after t=0 (ODE residual checks avoid these).
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (const Piece& p : pieces_)
            if (p.t_begin > 0.0) b.push_back(p.t_begin);
        return b;
    }

    /// Time-reversed schedule over [0, span]: result(t) = (*this)(span - t).
    PiecewiseControls reversed(double span) const {
        PiecewiseControls out;
        // Source piece k covers [b_k, b_{k+1}); reversed it covers
        // [span - b_{k+1}, span - b_k) with the heading ramp negated.
        for (std::size_t k = pieces_.size(); k-- > 0;) {
            const Piece& p = pieces_[k];
            double b_next = (k + 1 < pieces_.size()) ? pieces_[k + 1].t_begin : span;
            double t_begin = span - b_next;
            double up_at_begin = p.up0 + p.up_rate * (b_next - p.t_begin);
            out.add_piece(t_begin, p.u_e, up_at_begin, -p.up_rate);
        }
        return out;
    }

  private:
    std::vector<Piece> pieces_;  // sorted by t_begin
};

}  // namespace sev
