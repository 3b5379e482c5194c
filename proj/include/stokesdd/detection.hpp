#pragma once

#include <span>
#include <vector>

#include "stokesdd/channel.hpp"
#include "stokesdd/constellation.hpp"
#include "stokesdd/frontend.hpp"
#include "stokesdd/likelihood.hpp"

namespace stokesdd {

/// A k-domain candidate for one slot. `index` identifies the source: for
/// full hypotheses it is the absolute e-domain pair index.
struct Hypothesis {
    DVector d_k;
    int index = 0;
};

struct DetectionResult {
    int index = -1;      // winning Hypothesis::index
    double score = 0.0;  // objective value at the winner
};

/// Argmin over `hypotheses` of |d_k|^2 - 2 sigma^2 ln I0(|<d_k,d_r>|/sigma^2)
/// (exact) or |d_k|^2 - 2|<d_k,d_r>| (high SNR). Ties go to the earliest
/// hypothesis. All hypotheses must share |d_k(3)|. Throws on an empty set.
DetectionResult detect_symbol(const DVector& d_r, std::span<const Hypothesis> hypotheses,
                              double sigma_sq, Mode mode);

/// One slot's decision expressed in the transmit domain.
struct SlotDecision {
    int pair = 0;          // absolute e-domain pair index
    SymbolIndex symbol{};  // data carried, relative to the previous decided slot
    double score = 0.0;
    bool fourth_undecidable = false;
};

/// Receiver state for one block: the constellation, a known channel and the
/// noise level, with the k-domain image of every e-domain pair cached.
class Receiver {
public:
    Receiver(const Constellation& c, const ChannelMatrix& h, double sigma_sq);

    const Constellation& constellation() const { return c_; }
    const ChannelMatrix& channel() const { return h_; }
    double sigma_sq() const { return sigma_sq_; }

    const JonesPair& k_of(int pair) const { return k_[static_cast<std::size_t>(pair)]; }

    /// d_k of `pair` when the previous slot carried `prev_pair`.
    DVector d_k(int pair, int prev_pair) const;

    /// All (n_r n_p)^2 hypotheses given the previous slot's pair; they
    /// share |d_k(3)| = |Dk_y|.
    std::vector<Hypothesis> hypotheses(int prev_pair) const;

    /// Symbol-by-symbol ML over all hypotheses, with the previous slot fixed
    /// to `prev_pair` (decision feedback or genie).
    SlotDecision detect_symbol(const DVector& d_r, int prev_pair, Mode mode) const;

    /// First successive step over the n_r^2 n_p candidates of
    /// (|k_x|, |k_y|, theta'), then gamma' as the feasible value closest to
    /// gamma'' + alpha. Flags `fourth_undecidable` when |Dr_y| = 0.
    SlotDecision detect_successive(const DVector& d_r, int prev_pair, Mode mode) const;

    /// Candidates examined per slot by detect_successive: (n_r^2 + 1) n_p.
    int successive_hypothesis_count() const;

    /// Min-sum (Viterbi) over the chain of `observations` (slots 1..n, slot 0
    /// being the pilot). State is the previous slot's e pair since d_k(3)
    /// depends on the complex Dk_y. Ties go to the lowest state index.
    std::vector<SlotDecision> detect_sequence(std::span<const DVector> observations, Mode mode) const;

    /// Per-slot cost of the sequence objective for `pair` after `prev_pair`,
    /// given the observation of this slot and |r_y| of the previous slot.
    double sequence_branch_cost(const DVector& d_r, double prev_mag_r_y, int pair, int prev_pair,
                                Mode mode) const;

    /// Hatted first-step candidates in (ring_x, ring_y, theta) order.
    const std::vector<DVector>& first_step_candidates() const { return hat_; }

private:
    Constellation c_;
    ChannelMatrix h_;
    double sigma_sq_;
    std::vector<JonesPair> k_;
    std::vector<double> kx_mag_;
    std::vector<cdouble> kx_unit_;
    std::vector<DVector> hat_;
};

/// detect_sequence as a free function over a pilot-led block.
std::vector<SlotDecision> detect_sequence(std::span<const DVector> observations, const Constellation& c,
                                          const ChannelMatrix& h, double sigma_sq, Mode mode);

/// detect_successive for one slot after `prev_pair`.
SlotDecision detect_successive(const DVector& d_r, const Constellation& c, const ChannelMatrix& h,
                               double sigma_sq, int prev_pair, Mode mode);

/// Maps a sequence of decided k-domain vectors (slots 1..n after the pilot)
/// back to e-domain symbols via the inverse Stokes map and the fourth
/// subchannel gain. Propagates DegenerateError on deep fades.
std::vector<FourDSymbol> decisions_to_e_domain(std::span<const DVector> decided, const ChannelMatrix& h,
                                               const Constellation& c);

/// Nearest-grid symbol indices of a recovered FourDSymbol.
SymbolIndex nearest_symbol(const Constellation& c, const FourDSymbol& s);

}  // namespace stokesdd
