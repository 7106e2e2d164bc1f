#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "obisim/book.hpp"
#include "obisim/private_values.hpp"
#include "obisim/rng.hpp"

namespace obisim {

// Decision logic for the three trader families, kept free of kernel plumbing
// so each rule can be tested directly.

struct OrderIntent {
    enum class Kind { None, Limit, Market };
    Kind kind = Kind::None;
    Side side = Side::Bid;
    std::int64_t quantity = 0;
    std::int64_t limit_price = 0; // ignored for market orders

    static OrderIntent none() { return {}; }
    static OrderIntent limit(Side s, std::int64_t qty, std::int64_t px) {
        return {Kind::Limit, s, qty, px};
    }
    static OrderIntent market(Side s, std::int64_t qty) {
        return {Kind::Market, s, qty, 0};
    }
};

struct Quote {
    std::optional<std::int64_t> bid;
    std::optional<std::int64_t> ask;
    std::optional<double> midpoint() const {
        if (!bid || !ask) return std::nullopt;
        return 0.5 * static_cast<double>(*bid + *ask);
    }
};

// ---------------------------------------------------------------------------
// Zero-intelligence value trader
// ---------------------------------------------------------------------------

struct ZiParams {
    double s_max_cents = 50.0;      // surplus requirement drawn U[0, s_max]
    std::int64_t order_shares = 100; // one position unit
};

// Picks a random direction and prices one unit so that a transaction at the
// limit always yields non-negative surplus versus the agent's valuation
// (final fundamental estimate plus the marginal private value of the
// implied position transition). Returns none at the holding limit.
inline OrderIntent zi_order_intent(double r_hat, const PrivateValueVector& pv,
                                   int position_units, const ZiParams& params,
                                   RngStream& rng) {
    const bool buy = rng.coin();
    const double surplus = rng.uniform(0.0, params.s_max_cents);
    if (buy) {
        if (!pv.can_buy(position_units)) return OrderIntent::none();
        const double valuation = r_hat + pv.buy_value(position_units);
        const std::int64_t px = static_cast<std::int64_t>(std::floor(valuation - surplus));
        if (px < 1) return OrderIntent::none(); // cannot bid below one cent with surplus
        return OrderIntent::limit(Side::Bid, params.order_shares, px);
    }
    if (!pv.can_sell(position_units)) return OrderIntent::none();
    const double valuation = r_hat + pv.sell_value(position_units);
    const std::int64_t px = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(valuation + surplus)));
    return OrderIntent::limit(Side::Ask, params.order_shares, px);
}

// ---------------------------------------------------------------------------
// Informed trader
// ---------------------------------------------------------------------------

struct InformedParams {
    double alpha_cents = 50.0;       // posture threshold on |r_hat - midpoint|
    std::int64_t order_shares = 100;
    std::int64_t empty_book_offset_cents = 50; // passive distance when no quote
};

// Always trades toward the estimated fundamental: aggressively (marketable
// limit at the opposite best) when the mispricing exceeds alpha, passively
// (joining the own-side best) otherwise. With no two-sided quote, posts a
// passive order a fixed offset away from the estimate.
inline OrderIntent informed_order_intent(double r_hat, const Quote& quote,
                                         const InformedParams& params, RngStream& rng) {
    const auto mid = quote.midpoint();
    if (!mid) {
        const bool buy = rng.coin();
        const double raw = buy
            ? r_hat - static_cast<double>(params.empty_book_offset_cents)
            : r_hat + static_cast<double>(params.empty_book_offset_cents);
        const std::int64_t px = std::max<std::int64_t>(1, std::llround(raw));
        return OrderIntent::limit(buy ? Side::Bid : Side::Ask, params.order_shares, px);
    }
    const double gap = r_hat - *mid;
    const bool buy = gap != 0.0 ? gap > 0.0 : rng.coin();
    const bool aggressive = std::abs(gap) > params.alpha_cents;
    std::int64_t px;
    if (aggressive) {
        px = buy ? *quote.ask : *quote.bid; // crosses the spread
    } else {
        px = buy ? *quote.bid : *quote.ask; // joins own side
    }
    return OrderIntent::limit(buy ? Side::Bid : Side::Ask, params.order_shares,
                              std::max<std::int64_t>(1, px));
}

// ---------------------------------------------------------------------------
// Order book imbalance liquidity trader
// ---------------------------------------------------------------------------

// Fraction of near-spread liquidity on the bid side, over up to `depth` best
// levels per side. Undefined (nullopt) when no volume is visible.
inline std::optional<double> obi_indicator(const BookSnapshot& snap, int depth) {
    if (depth < 1) throw std::invalid_argument("obi_indicator: depth must be >= 1");
    std::int64_t bid_vol = 0;
    std::int64_t total = 0;
    const std::size_t d = static_cast<std::size_t>(depth);
    for (std::size_t i = 0; i < snap.bids.size() && i < d; ++i)
        bid_vol += snap.bids[i].volume;
    total = bid_vol;
    for (std::size_t i = 0; i < snap.asks.size() && i < d; ++i)
        total += snap.asks[i].volume;
    if (total == 0) return std::nullopt;
    return static_cast<double>(bid_vol) / static_cast<double>(total);
}

struct ObiParams {
    double entry_threshold = 0.17; // H
    double trail_distance = 0.085; // D
    int depth = 10;                // L
    std::int64_t trade_size = 100;
};

enum class ObiPosition : std::uint8_t { Flat, Long, Short };

enum class ObiAction : std::uint8_t { None, EnterLong, EnterShort, ExitLong, ExitShort };

// Entry when the indicator leaves the band [0.5-H, 0.5+H] (strict), exit on a
// trailing stop at distance D from the most favorable indicator level seen
// since entry. At most one transition per evaluation.
struct ObiState {
    ObiPosition position = ObiPosition::Flat;
    double extreme = 0.0; // defined only while in a position

    ObiAction step(double indicator, const ObiParams& params) {
        switch (position) {
        case ObiPosition::Flat:
            if (indicator > 0.5 + params.entry_threshold) {
                position = ObiPosition::Long;
                extreme = indicator;
                return ObiAction::EnterLong;
            }
            if (indicator < 0.5 - params.entry_threshold) {
                position = ObiPosition::Short;
                extreme = indicator;
                return ObiAction::EnterShort;
            }
            return ObiAction::None;
        case ObiPosition::Long:
            extreme = std::max(extreme, indicator);
            if (indicator <= extreme - params.trail_distance) {
                position = ObiPosition::Flat;
                return ObiAction::ExitLong;
            }
            return ObiAction::None;
        case ObiPosition::Short:
            extreme = std::min(extreme, indicator);
            if (indicator >= extreme + params.trail_distance) {
                position = ObiPosition::Flat;
                return ObiAction::ExitShort;
            }
            return ObiAction::None;
        }
        return ObiAction::None;
    }
};

// ---------------------------------------------------------------------------
// Portfolio accounting
// ---------------------------------------------------------------------------

struct PortfolioState {
    std::int64_t cash_cents = 0;
    std::int64_t shares = 0;

    void apply_fill(Side side, std::int64_t price, std::int64_t quantity) {
        if (side == Side::Bid) {
            cash_cents -= price * quantity;
            shares += quantity;
        } else {
            cash_cents += price * quantity;
            shares -= quantity;
        }
    }

    // Cash delta plus open position valued at the mark.
    std::int64_t mark_to_market(double mark_price_cents) const {
        return cash_cents +
               std::llround(static_cast<double>(shares) * mark_price_cents);
    }
};

} // namespace obisim
