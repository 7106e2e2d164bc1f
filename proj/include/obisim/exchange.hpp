#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obisim/book.hpp"
#include "obisim/kernel.hpp"

namespace obisim {

struct ExchangeParams {
    int snapshot_depth = 10;
    std::int64_t tick_size_cents = 1;
};

// Single-security exchange agent. All access to the book goes through kernel
// message delivery, so each submitting agent's information is exactly as old
// as its communication path. Book changes are pushed as depth-limited
// snapshots to every subscriber; that push is the channel through which
// latency differentiates the imbalance traders.
class ExchangeAgent : public Agent {
public:
    ExchangeAgent(AgentId id, const ExchangeParams& params)
        : Agent(id, "exchange"), params_(params) {
        if (params_.snapshot_depth < 1)
            throw std::invalid_argument("exchange: snapshot_depth must be >= 1");
        if (params_.tick_size_cents < 1)
            throw std::invalid_argument("exchange: tick_size_cents must be >= 1");
    }

    void on_message(Kernel& kernel, const Message& msg) override {
        struct Visitor {
            ExchangeAgent& self;
            Kernel& kernel;
            const Message& msg;
            void operator()(const LimitOrderMsg& m) { self.handle_limit(kernel, msg.sender, m); }
            void operator()(const MarketOrderMsg& m) { self.handle_market(kernel, msg.sender, m); }
            void operator()(const CancelOrderMsg& m) { self.handle_cancel(kernel, msg.sender, m); }
            void operator()(const SubscribeDepthMsg&) { self.handle_subscribe(msg.sender); }
            void operator()(const SnapshotRequestMsg&) {
                kernel.send_message(SnapshotMsg{self.book_.snapshot(self.params_.snapshot_depth,
                                                                    kernel.now())},
                                    msg.sender);
            }
            void operator()(const SnapshotMsg&) {}
            void operator()(const OrderAckMsg&) {}
            void operator()(const FillMsg&) {}
            void operator()(const CancelAckMsg&) {}
            void operator()(const RejectMsg&) {}
        };
        std::visit(Visitor{*this, kernel, msg}, msg.body);
    }

    const LimitOrderBook& book() const { return book_; }
    LimitOrderBook& book() { return book_; }
    const std::vector<Trade>& trade_tape() const { return tape_; }
    const std::vector<AgentId>& subscribers() const { return subscribers_; }

    // Mark price for end-of-day valuation: midpoint when two-sided, else the
    // last trade, else the supplied fallback (the fundamental mean).
    double mark_price(double fallback) const {
        const auto bid = book_.best_bid();
        const auto ask = book_.best_ask();
        if (bid && ask) return 0.5 * static_cast<double>(*bid + *ask);
        if (!tape_.empty()) return static_cast<double>(tape_.back().price);
        return fallback;
    }

    // Trade tape rows: time_ns,price_cents,qty,resting_agent,incoming_agent
    static std::string tape_header() {
        return "time_ns,price_cents,qty,resting_agent,incoming_agent";
    }
    static std::string tape_row(const Trade& t) {
        return std::to_string(t.time) + ',' + std::to_string(t.price) + ',' +
               std::to_string(t.quantity) + ',' + std::to_string(t.resting_agent) + ',' +
               std::to_string(t.incoming_agent);
    }

private:
    void handle_limit(Kernel& kernel, AgentId sender, const LimitOrderMsg& m) {
        if (m.quantity <= 0) {
            kernel.send_message(RejectMsg{m.client_ref, "non-positive quantity"}, sender);
            return;
        }
        if (m.limit_price <= 0) {
            kernel.send_message(RejectMsg{m.client_ref, "non-positive price"}, sender);
            return;
        }
        if (m.limit_price % params_.tick_size_cents != 0) {
            kernel.send_message(RejectMsg{m.client_ref, "price off tick"}, sender);
            return;
        }
        const auto res = book_.submit_limit(sender, m.side, m.quantity, m.limit_price,
                                            kernel.now());
        settle(kernel, sender, m.side, m.client_ref, res);
        publish(kernel);
    }

    void handle_market(Kernel& kernel, AgentId sender, const MarketOrderMsg& m) {
        if (m.quantity <= 0) {
            kernel.send_message(RejectMsg{m.client_ref, "non-positive quantity"}, sender);
            return;
        }
        const auto res = book_.submit_market(sender, m.side, m.quantity, kernel.now());
        settle(kernel, sender, m.side, m.client_ref, res);
        if (!res.trades.empty()) publish(kernel);
    }

    void handle_cancel(Kernel& kernel, AgentId sender, const CancelOrderMsg& m) {
        std::int64_t removed = 0;
        try {
            removed = book_.cancel(sender, m.order_id);
        } catch (const UnauthorizedCancel&) {
            kernel.send_message(RejectMsg{m.order_id, "cancel not authorized"}, sender);
            return;
        }
        kernel.send_message(CancelAckMsg{m.order_id, removed}, sender);
        if (removed > 0) publish(kernel);
    }

    void handle_subscribe(AgentId sender) {
        if (std::find(subscribers_.begin(), subscribers_.end(), sender) ==
            subscribers_.end())
            subscribers_.push_back(sender);
    }

    void settle(Kernel& kernel, AgentId sender, Side side, std::uint64_t client_ref,
                const LimitOrderBook::SubmitResult& res) {
        for (const Trade& t : res.trades) {
            tape_.push_back(t);
            kernel.send_message(
                FillMsg{t.incoming_order_id, side, t.price, t.quantity, false}, sender);
            kernel.send_message(
                FillMsg{t.resting_order_id, opposite(side), t.price, t.quantity, true},
                t.resting_agent);
        }
        kernel.send_message(
            OrderAckMsg{res.order_id, client_ref, res.filled, res.rested, res.cancelled},
            sender);
    }

    void publish(Kernel& kernel) {
        if (subscribers_.empty()) return;
        const BookSnapshot snap = book_.snapshot(params_.snapshot_depth, kernel.now());
        for (AgentId sub : subscribers_) kernel.send_message(SnapshotMsg{snap}, sub);
    }

    ExchangeParams params_;
    LimitOrderBook book_;
    std::vector<Trade> tape_;
    std::vector<AgentId> subscribers_;
};

} // namespace obisim
