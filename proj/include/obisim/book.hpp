#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "obisim/time.hpp"

namespace obisim {

using AgentId = std::int32_t;

enum class Side : std::uint8_t { Bid, Ask };

inline Side opposite(Side s) { return s == Side::Bid ? Side::Ask : Side::Bid; }
inline const char* side_name(Side s) { return s == Side::Bid ? "bid" : "ask"; }

// An order as submitted to the exchange. No limit price means market order.
struct Order {
    std::uint64_t id = 0; // assigned by the book on submission
    AgentId agent = -1;
    Side side = Side::Bid;
    std::int64_t quantity = 0;                 // shares
    std::optional<std::int64_t> limit_price;   // cents
};

struct Trade {
    std::int64_t price = 0;    // cents; always the resting order's limit price
    std::int64_t quantity = 0; // shares
    std::uint64_t resting_order_id = 0;
    std::uint64_t incoming_order_id = 0;
    AgentId resting_agent = -1;
    AgentId incoming_agent = -1;
    SimTime time = 0;
};

struct BookLevel {
    std::int64_t price = 0;
    std::int64_t volume = 0;
};

// Aggregate view of up to `depth` best levels per side, best first.
struct BookSnapshot {
    SimTime time = 0;
    std::vector<BookLevel> bids; // descending price
    std::vector<BookLevel> asks; // ascending price

    std::optional<std::int64_t> best_bid() const {
        if (bids.empty()) return std::nullopt;
        return bids.front().price;
    }
    std::optional<std::int64_t> best_ask() const {
        if (asks.empty()) return std::nullopt;
        return asks.front().price;
    }
    std::optional<double> midpoint() const {
        if (bids.empty() || asks.empty()) return std::nullopt;
        return 0.5 * static_cast<double>(bids.front().price + asks.front().price);
    }
};

struct UnauthorizedCancel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Price-time priority limit order book for a single security.
//
// Matching follows the usual continuous double auction rules: an arriving
// buy transacts against the lowest-priced asks, an arriving sell against the
// highest-priced bids, oldest first within a price level, and every fill
// prints at the price of the order that was already resting.
class LimitOrderBook {
public:
    struct Resting {
        std::uint64_t id = 0;
        AgentId agent = -1;
        std::int64_t quantity = 0;
        SimTime arrival_time = 0;
        std::uint64_t arrival_seq = 0;
    };

    struct SubmitResult {
        std::uint64_t order_id = 0;
        std::vector<Trade> trades;
        std::int64_t filled = 0;
        std::int64_t rested = 0;    // remainder now resting (limit orders only)
        std::int64_t cancelled = 0; // remainder discarded (market orders only)
    };

    // Limit order: match while crossing, rest the remainder.
    SubmitResult submit_limit(AgentId agent, Side side, std::int64_t qty,
                              std::int64_t limit_price, SimTime now) {
        validate_qty(qty);
        if (limit_price <= 0)
            throw std::invalid_argument("submit_limit: price must be positive");
        SubmitResult res;
        res.order_id = next_order_id_++;
        res.trades = match(agent, res.order_id, side, qty, limit_price, now);
        res.filled = qty - remaining_;
        if (remaining_ > 0) {
            rest(agent, res.order_id, side, remaining_, limit_price, now);
            res.rested = remaining_;
        }
        return res;
    }

    // Market order: match against whatever is available, discard the rest.
    SubmitResult submit_market(AgentId agent, Side side, std::int64_t qty, SimTime now) {
        validate_qty(qty);
        SubmitResult res;
        res.order_id = next_order_id_++;
        res.trades = match(agent, res.order_id, side, qty, std::nullopt, now);
        res.filled = qty - remaining_;
        res.cancelled = remaining_;
        return res;
    }

    // Removes the unfilled remainder of a resting order. Returns the removed
    // quantity; 0 when the order is unknown or already gone (idempotent).
    std::int64_t cancel(AgentId agent, std::uint64_t order_id) {
        auto it = locator_.find(order_id);
        if (it == locator_.end()) return 0;
        const auto [side, price] = it->second;
        auto& levels = (side == Side::Bid) ? bids_ : asks_;
        auto level_it = levels.find(price);
        std::int64_t removed = 0;
        auto& queue = level_it->second;
        for (auto q = queue.begin(); q != queue.end(); ++q) {
            if (q->id != order_id) continue;
            if (q->agent != agent)
                throw UnauthorizedCancel("cancel: order " + std::to_string(order_id) +
                                         " does not belong to agent " + std::to_string(agent));
            removed = q->quantity;
            queue.erase(q);
            break;
        }
        if (queue.empty()) levels.erase(level_it);
        locator_.erase(order_id);
        return removed;
    }

    std::optional<std::int64_t> best_bid() const {
        if (bids_.empty()) return std::nullopt;
        return bids_.begin()->first;
    }
    std::optional<std::int64_t> best_ask() const {
        if (asks_.empty()) return std::nullopt;
        return asks_.begin()->first;
    }

    BookSnapshot snapshot(int depth, SimTime now) const {
        if (depth < 1) throw std::invalid_argument("snapshot: depth must be >= 1");
        BookSnapshot snap;
        snap.time = now;
        int n = 0;
        for (const auto& [price, queue] : bids_) {
            if (n++ == depth) break;
            std::int64_t vol = 0;
            for (const auto& r : queue) vol += r.quantity;
            snap.bids.push_back({price, vol});
        }
        n = 0;
        for (const auto& [price, queue] : asks_) {
            if (n++ == depth) break;
            std::int64_t vol = 0;
            for (const auto& r : queue) vol += r.quantity;
            snap.asks.push_back({price, vol});
        }
        return snap;
    }

    bool crossed() const {
        return best_bid() && best_ask() && *best_bid() >= *best_ask();
    }

    // Resting orders on one side, best price first, FIFO within a level.
    std::vector<Resting> side_orders(Side side) const {
        std::vector<Resting> out;
        auto collect = [&out](const auto& levels) {
            for (const auto& [price, queue] : levels)
                for (const auto& r : queue) out.push_back(r);
        };
        if (side == Side::Bid) collect(bids_); else collect(asks_);
        return out;
    }

    std::optional<std::int64_t> resting_price(std::uint64_t order_id) const {
        auto it = locator_.find(order_id);
        if (it == locator_.end()) return std::nullopt;
        return it->second.second;
    }

    std::size_t resting_order_count() const { return locator_.size(); }

private:
    static void validate_qty(std::int64_t qty) {
        if (qty <= 0) throw std::invalid_argument("order quantity must be positive");
    }

    std::vector<Trade> match(AgentId agent, std::uint64_t order_id, Side side,
                             std::int64_t qty, std::optional<std::int64_t> limit,
                             SimTime now) {
        std::vector<Trade> trades;
        remaining_ = qty;
        auto fill_from = [&](auto& levels, auto crosses) {
            while (remaining_ > 0 && !levels.empty()) {
                auto level_it = levels.begin();
                if (!crosses(level_it->first)) break;
                auto& queue = level_it->second;
                while (remaining_ > 0 && !queue.empty()) {
                    Resting& resting = queue.front();
                    const std::int64_t traded = std::min(remaining_, resting.quantity);
                    Trade t;
                    t.price = level_it->first;
                    t.quantity = traded;
                    t.resting_order_id = resting.id;
                    t.incoming_order_id = order_id;
                    t.resting_agent = resting.agent;
                    t.incoming_agent = agent;
                    t.time = now;
                    trades.push_back(t);
                    remaining_ -= traded;
                    resting.quantity -= traded;
                    if (resting.quantity == 0) {
                        locator_.erase(resting.id);
                        queue.pop_front();
                    }
                }
                if (queue.empty()) levels.erase(level_it);
            }
        };
        if (side == Side::Bid) {
            fill_from(asks_, [&](std::int64_t px) { return !limit || px <= *limit; });
        } else {
            fill_from(bids_, [&](std::int64_t px) { return !limit || px >= *limit; });
        }
        return trades;
    }

    void rest(AgentId agent, std::uint64_t order_id, Side side, std::int64_t qty,
              std::int64_t price, SimTime now) {
        Resting r;
        r.id = order_id;
        r.agent = agent;
        r.quantity = qty;
        r.arrival_time = now;
        r.arrival_seq = next_arrival_seq_++;
        if (side == Side::Bid) bids_[price].push_back(r);
        else asks_[price].push_back(r);
        locator_.emplace(order_id, std::make_pair(side, price));
    }

    std::map<std::int64_t, std::deque<Resting>, std::greater<>> bids_;
    std::map<std::int64_t, std::deque<Resting>> asks_;
    std::unordered_map<std::uint64_t, std::pair<Side, std::int64_t>> locator_;
    std::uint64_t next_order_id_ = 1;
    std::uint64_t next_arrival_seq_ = 0;
    std::int64_t remaining_ = 0;
};

} // namespace obisim
