#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "obisim/book.hpp"
#include "obisim/rng.hpp"
#include "obisim/time.hpp"

namespace obisim {

// ---------------------------------------------------------------------------
// Messages
// ---------------------------------------------------------------------------

struct LimitOrderMsg {
    Side side;
    std::int64_t quantity;
    std::int64_t limit_price;
    std::uint64_t client_ref; // sender-chosen correlation id
};

struct MarketOrderMsg {
    Side side;
    std::int64_t quantity;
    std::uint64_t client_ref;
};

struct CancelOrderMsg {
    std::uint64_t order_id;
};

struct SubscribeDepthMsg {}; // subscribe to book snapshots pushed on change

struct SnapshotRequestMsg {}; // one-shot snapshot request

struct SnapshotMsg {
    BookSnapshot snapshot;
};

// Disposition of a submitted order: filled + rested + cancelled == submitted.
struct OrderAckMsg {
    std::uint64_t order_id;
    std::uint64_t client_ref;
    std::int64_t filled;
    std::int64_t rested;
    std::int64_t cancelled;
};

struct FillMsg {
    std::uint64_t order_id; // the receiving agent's own order
    Side side;              // the receiving agent's side of the trade
    std::int64_t price;
    std::int64_t quantity;
    bool resting; // true when the receiving agent was the resting side
};

struct CancelAckMsg {
    std::uint64_t order_id;
    std::int64_t cancelled_qty;
};

struct RejectMsg {
    std::uint64_t client_ref;
    std::string reason;
};

using MessageBody =
    std::variant<LimitOrderMsg, MarketOrderMsg, CancelOrderMsg, SubscribeDepthMsg,
                 SnapshotRequestMsg, SnapshotMsg, OrderAckMsg, FillMsg, CancelAckMsg,
                 RejectMsg>;

struct Message {
    AgentId sender = -1;
    AgentId recipient = -1;
    SimTime time_sent = 0;
    SimTime time_received = 0;
    MessageBody body;
};

// One line per message body in event-log summaries; comma-free by contract.
inline std::string summarize(const MessageBody& body) {
    struct Visitor {
        std::string operator()(const LimitOrderMsg& m) const {
            return std::string("limit_") + side_name(m.side) + " qty=" +
                   std::to_string(m.quantity) + " px=" + std::to_string(m.limit_price) +
                   " ref=" + std::to_string(m.client_ref);
        }
        std::string operator()(const MarketOrderMsg& m) const {
            return std::string("market_") + side_name(m.side) + " qty=" +
                   std::to_string(m.quantity) + " ref=" + std::to_string(m.client_ref);
        }
        std::string operator()(const CancelOrderMsg& m) const {
            return "cancel id=" + std::to_string(m.order_id);
        }
        std::string operator()(const SubscribeDepthMsg&) const { return "subscribe"; }
        std::string operator()(const SnapshotRequestMsg&) const { return "snapshot_request"; }
        std::string operator()(const SnapshotMsg& m) const {
            std::int64_t bid_vol = 0;
            std::int64_t ask_vol = 0;
            for (const auto& l : m.snapshot.bids) bid_vol += l.volume;
            for (const auto& l : m.snapshot.asks) ask_vol += l.volume;
            return "snapshot bid_vol=" + std::to_string(bid_vol) +
                   " ask_vol=" + std::to_string(ask_vol) +
                   " levels=" + std::to_string(m.snapshot.bids.size()) + "/" +
                   std::to_string(m.snapshot.asks.size());
        }
        std::string operator()(const OrderAckMsg& m) const {
            return "ack id=" + std::to_string(m.order_id) +
                   " filled=" + std::to_string(m.filled) +
                   " rested=" + std::to_string(m.rested) +
                   " cancelled=" + std::to_string(m.cancelled);
        }
        std::string operator()(const FillMsg& m) const {
            return std::string("fill_") + side_name(m.side) + " id=" +
                   std::to_string(m.order_id) + " px=" + std::to_string(m.price) +
                   " qty=" + std::to_string(m.quantity) +
                   (m.resting ? " resting" : " incoming");
        }
        std::string operator()(const CancelAckMsg& m) const {
            return "cancel_ack id=" + std::to_string(m.order_id) +
                   " qty=" + std::to_string(m.cancelled_qty);
        }
        std::string operator()(const RejectMsg& m) const {
            return "reject ref=" + std::to_string(m.client_ref) + " " + m.reason;
        }
    };
    return std::visit(Visitor{}, body);
}

// ---------------------------------------------------------------------------
// Agents
// ---------------------------------------------------------------------------

class Kernel;

class Agent {
public:
    Agent(AgentId id, std::string type) : id_(id), type_(std::move(type)) {}
    virtual ~Agent() = default;

    AgentId id() const { return id_; }
    const std::string& type() const { return type_; }

    // Called once before the event loop starts, with the kernel at t = 0.
    virtual void on_start(Kernel&) {}
    virtual void on_wakeup(Kernel&) {}
    virtual void on_message(Kernel&, const Message&) {}

private:
    AgentId id_;
    std::string type_;
};

struct CausalityError : std::logic_error {
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Kernel
// ---------------------------------------------------------------------------

struct KernelParams {
    std::uint64_t seed = 1;
    double jitter_factor = 0.5; // mean jitter as a multiple of min latency; 0 disables
    double jitter_sigma = 0.5;  // log-normal shape of the jitter multiplier
};

struct RunStats {
    std::uint64_t events_processed = 0;
    std::uint64_t iterations = 0; // queue examinations; equals events when run to quiescence
    SimTime last_event_time = 0;
};

// Event-driven simulation core. Time advances only by jumping to the next
// scheduled event; ties at equal timestamps fire in insertion order.
//
// Every inter-agent message pays the sender's computation delay, then the
// pairwise minimum latency, then a non-negative jitter draw from the
// non-exchange endpoint's own jitter stream.
class Kernel {
public:
    explicit Kernel(const KernelParams& params) : params_(params) {}

    // Agents are registered with their latency to the exchange (the exchange
    // itself registers with 0) and their per-message computation delay.
    void register_agent(Agent* agent, SimTime latency_ns, SimTime computation_delay_ns) {
        if (agent == nullptr) throw std::invalid_argument("register_agent: null agent");
        if (agent->id() != static_cast<AgentId>(agents_.size()))
            throw std::invalid_argument("register_agent: ids must be dense and in order");
        agents_.push_back(agent);
        latency_ns_.push_back(latency_ns);
        computation_delay_ns_.push_back(computation_delay_ns);
        jitter_streams_.emplace_back(params_.seed,
                                     "jitter/" + std::to_string(agent->id()));
    }

    SimTime now() const { return now_; }
    std::size_t agent_count() const { return agents_.size(); }
    SimTime latency_of(AgentId a) const { return latency_ns_.at(static_cast<std::size_t>(a)); }

    SimTime min_latency(AgentId a, AgentId b) const {
        return latency_ns_.at(static_cast<std::size_t>(a)) +
               latency_ns_.at(static_cast<std::size_t>(b));
    }

    // Optional sink receiving one line per processed event:
    //   seq,fire_time_ns,kind,sender,recipient,summary
    void set_event_sink(std::ostream* sink) { event_sink_ = sink; }

    std::uint64_t schedule_wakeup(AgentId agent, SimTime at) {
        check_agent(agent);
        if (at < now_)
            throw CausalityError("schedule_wakeup: " + std::to_string(at) +
                                 " is in the past (now " + std::to_string(now_) + ")");
        Event ev;
        ev.at = at;
        ev.seq = next_seq_++;
        ev.kind = EventKind::Wakeup;
        ev.agent = agent;
        const std::uint64_t handle = ev.seq;
        queue_.push(std::move(ev));
        return handle;
    }

    // Sends from the currently executing agent. Returns the delivery time.
    SimTime send_message(MessageBody body, AgentId recipient) {
        if (current_agent_ < 0)
            throw std::logic_error("send_message: no agent is executing");
        check_agent(recipient);
        const AgentId sender = current_agent_;
        const SimTime sent =
            now_ + computation_delay_ns_[static_cast<std::size_t>(sender)];
        const SimTime min_lat = min_latency(sender, recipient);
        const SimTime received = sent + min_lat + jitter_draw(sender, recipient, min_lat);

        Event ev;
        ev.at = received;
        ev.seq = next_seq_++;
        ev.kind = EventKind::Delivery;
        ev.agent = recipient;
        ev.msg = Message{sender, recipient, sent, received, std::move(body)};
        queue_.push(std::move(ev));
        return received;
    }

    // Runs on_start for every agent (at t = 0), then drains the queue in
    // (time, seq) order until it is empty or the next event is past `until`.
    RunStats run(SimTime until) {
        for (Agent* agent : agents_) {
            current_agent_ = agent->id();
            agent->on_start(*this);
        }
        current_agent_ = -1;

        RunStats stats;
        while (!queue_.empty()) {
            ++stats.iterations;
            const Event& top = queue_.top();
            if (top.at > until) break;
            Event ev = top; // copy out; queue_.top() is const
            queue_.pop();
            if (ev.at < now_)
                throw CausalityError("kernel: event time ran backwards");
            now_ = ev.at;
            log_event(ev);
            ++stats.events_processed;
            stats.last_event_time = ev.at;
            current_agent_ = ev.agent;
            Agent* agent = agents_[static_cast<std::size_t>(ev.agent)];
            if (ev.kind == EventKind::Wakeup) agent->on_wakeup(*this);
            else agent->on_message(*this, *ev.msg);
            current_agent_ = -1;
        }
        events_processed_ += stats.events_processed;
        return stats;
    }

    std::uint64_t events_processed() const { return events_processed_; }

private:
    enum class EventKind : std::uint8_t { Wakeup, Delivery };

    struct Event {
        SimTime at = 0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::Wakeup;
        AgentId agent = -1; // wakeup target or message recipient
        std::optional<Message> msg;
    };

    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    void check_agent(AgentId id) const {
        if (id < 0 || static_cast<std::size_t>(id) >= agents_.size())
            throw std::invalid_argument("unknown agent id " + std::to_string(id));
    }

    // Jitter scales with path length and draws from the stream of the
    // non-exchange endpoint (the endpoint with nonzero latency), so one
    // agent's traffic never consumes another agent's jitter draws.
    SimTime jitter_draw(AgentId sender, AgentId recipient, SimTime min_lat) {
        if (params_.jitter_factor <= 0.0 || min_lat == 0) return 0;
        const AgentId owner =
            latency_ns_[static_cast<std::size_t>(sender)] > 0 ? sender : recipient;
        RngStream& rng = jitter_streams_[static_cast<std::size_t>(owner)];
        const double mult =
            params_.jitter_factor * rng.lognormal_unit_mean(params_.jitter_sigma);
        const double jitter = static_cast<double>(min_lat) * std::max(0.0, mult);
        return static_cast<SimTime>(std::llround(jitter));
    }

    void log_event(const Event& ev) {
        if (event_sink_ == nullptr) return;
        std::ostream& os = *event_sink_;
        os << ev.seq << ',' << ev.at << ',';
        if (ev.kind == EventKind::Wakeup) {
            os << "wakeup," << ev.agent << ',' << ev.agent << ",wakeup\n";
        } else {
            os << "msg," << ev.msg->sender << ',' << ev.msg->recipient << ','
               << summarize(ev.msg->body) << '\n';
        }
    }

    KernelParams params_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t events_processed_ = 0;
    AgentId current_agent_ = -1;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::vector<Agent*> agents_;
    std::vector<SimTime> latency_ns_;
    std::vector<SimTime> computation_delay_ns_;
    std::vector<RngStream> jitter_streams_;
    std::ostream* event_sink_ = nullptr;
};

} // namespace obisim
