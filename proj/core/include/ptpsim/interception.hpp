#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptpsim/clock.hpp"

namespace ptpsim {

/// Interception sites on the modeled syscall boundary.
enum class HookPoint { ReadPhc, ReadSys, AdjFreqPhc, AdjFreqSys, SetOffsetPhc, SetOffsetSys };

inline constexpr std::size_t kHookPointCount = 6;

std::string_view to_string(HookPoint hook);
std::optional<HookPoint> hook_from_string(std::string_view name);
bool is_read_hook(HookPoint hook);
bool is_freq_hook(HookPoint hook);
bool is_setoffset_hook(HookPoint hook);

/// Hook that a clock_gettime() on `clock` passes through; none for MASTER.
std::optional<HookPoint> read_hook_for(ClockId clock);
/// Hook that a clock_adjtime() of the given mode on `clock` passes through.
std::optional<HookPoint> adj_hook_for(ClockId clock, TimexRequest::Mode mode);

/**
 * An installed attack transform. Payloads see and rewrite syscall
 * arguments and return values; they never touch clock state directly.
 */
class Payload {
public:
    virtual ~Payload() = default;

    virtual std::string_view kind() const = 0;
    virtual bool accepts(HookPoint hook) const = 0;
    virtual std::string describe() const;

    virtual SimTime on_read(HookPoint hook, SimTime raw, std::uint64_t call_index);
    virtual TimexRequest on_adj(HookPoint hook, TimexRequest req, std::uint64_t call_index);
};

struct Activation {
    enum class Kind { Immediate, AtTime, OnLock };

    Kind kind = Kind::Immediate;
    std::int64_t at_ns = 0;  // AtTime: ns since logging start

    static constexpr Activation immediate() { return {Kind::Immediate, 0}; }
    static constexpr Activation at(std::int64_t ns) { return {Kind::AtTime, ns}; }
    static constexpr Activation on_lock() { return {Kind::OnLock, 0}; }

    bool operator==(const Activation&) const = default;
};

/// Ordered payload list with per-hook call counters.
class PayloadChain {
public:
    PayloadChain() = default;
    PayloadChain(PayloadChain&&) noexcept = default;
    PayloadChain& operator=(PayloadChain&&) noexcept = default;

    /// Appends `payload` at `hook`. Throws std::invalid_argument if the
    /// payload does not support that hook.
    void install(HookPoint hook, std::unique_ptr<Payload> payload,
                 Activation activation = Activation::immediate());

    /// Applies every active payload on `hook` in installation order. The
    /// call index handed to payloads is the per-hook count of earlier calls.
    SimTime dispatch_read(HookPoint hook, SimTime raw);
    TimexRequest dispatch_adj(HookPoint hook, TimexRequest req);

    /// Latches activations. `run_time_ns` is measured from the start of
    /// logging (negative during warm-up); OnLock and AtTime payloads never
    /// fire before it reaches zero.
    void update_activation(std::int64_t run_time_ns, bool servos_locked);

    std::uint64_t call_count(HookPoint hook) const { return calls_[static_cast<std::size_t>(hook)]; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool is_active(std::size_t index) const { return entries_.at(index).active; }
    /// Logging-relative time (ns) at which the payload latched, if it has.
    std::optional<std::int64_t> activated_at(std::size_t index) const { return entries_.at(index).activated_at; }
    HookPoint hook_of(std::size_t index) const { return entries_.at(index).hook; }
    const Payload& payload(std::size_t index) const { return *entries_.at(index).payload; }

private:
    struct Entry {
        HookPoint hook;
        std::unique_ptr<Payload> payload;
        Activation activation;
        bool active = false;
        std::optional<std::int64_t> activated_at;
    };

    std::vector<Entry> entries_;
    std::array<std::uint64_t, kHookPointCount> calls_{};
};

/**
 * The kernel side of clock_gettime()/clock_adjtime() for the victim host.
 * Every protocol and servo access to PHC or system clock goes through here.
 * Constructed without a chain it calls the raw clock operations directly.
 */
class ClockBoundary {
public:
    ClockBoundary() = default;
    explicit ClockBoundary(PayloadChain& chain) : chain_(&chain) {}

    SimTime clock_gettime(const SimClock& clock, SimTime true_now);
    void clock_adjtime(SimClock& clock, const TimexRequest& req);

    bool bypassed() const { return chain_ == nullptr; }

private:
    PayloadChain* chain_ = nullptr;
};

}  // namespace ptpsim
