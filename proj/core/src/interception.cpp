#include "ptpsim/interception.hpp"

#include <stdexcept>

namespace ptpsim {

namespace {

constexpr std::array<std::string_view, kHookPointCount> kHookNames = {
    "READ_PHC", "READ_SYS", "ADJ_FREQ_PHC", "ADJ_FREQ_SYS", "SET_OFFSET_PHC", "SET_OFFSET_SYS",
};

}  // namespace

std::string_view to_string(HookPoint hook)
{
    return kHookNames[static_cast<std::size_t>(hook)];
}

std::optional<HookPoint> hook_from_string(std::string_view name)
{
    for (std::size_t i = 0; i < kHookNames.size(); ++i) {
        if (kHookNames[i] == name)
            return static_cast<HookPoint>(i);
    }
    return std::nullopt;
}

bool is_read_hook(HookPoint hook)
{
    return hook == HookPoint::ReadPhc || hook == HookPoint::ReadSys;
}

bool is_freq_hook(HookPoint hook)
{
    return hook == HookPoint::AdjFreqPhc || hook == HookPoint::AdjFreqSys;
}

bool is_setoffset_hook(HookPoint hook)
{
    return hook == HookPoint::SetOffsetPhc || hook == HookPoint::SetOffsetSys;
}

std::optional<HookPoint> read_hook_for(ClockId clock)
{
    switch (clock) {
    case ClockId::Phc: return HookPoint::ReadPhc;
    case ClockId::System: return HookPoint::ReadSys;
    case ClockId::Master: break;
    }
    return std::nullopt;
}

std::optional<HookPoint> adj_hook_for(ClockId clock, TimexRequest::Mode mode)
{
    const bool freq = mode == TimexRequest::Mode::Frequency;
    switch (clock) {
    case ClockId::Phc: return freq ? HookPoint::AdjFreqPhc : HookPoint::SetOffsetPhc;
    case ClockId::System: return freq ? HookPoint::AdjFreqSys : HookPoint::SetOffsetSys;
    case ClockId::Master: break;
    }
    return std::nullopt;
}

std::string Payload::describe() const
{
    return std::string(kind());
}

SimTime Payload::on_read(HookPoint, SimTime raw, std::uint64_t)
{
    return raw;
}

TimexRequest Payload::on_adj(HookPoint, TimexRequest req, std::uint64_t)
{
    return req;
}

void PayloadChain::install(HookPoint hook, std::unique_ptr<Payload> payload, Activation activation)
{
    if (!payload)
        throw std::invalid_argument("PayloadChain::install: null payload");
    if (!payload->accepts(hook)) {
        throw std::invalid_argument("payload '" + std::string(payload->kind()) +
                                    "' cannot be installed on " + std::string(to_string(hook)));
    }
    Entry e{hook, std::move(payload), activation, false, std::nullopt};
    e.active = activation.kind == Activation::Kind::Immediate;
    entries_.push_back(std::move(e));
}

SimTime PayloadChain::dispatch_read(HookPoint hook, SimTime raw)
{
    if (!is_read_hook(hook))
        throw std::invalid_argument("dispatch_read on adjustment hook " + std::string(to_string(hook)));
    const std::uint64_t index = calls_[static_cast<std::size_t>(hook)]++;
    SimTime ts = raw;
    for (auto& e : entries_) {
        if (e.active && e.hook == hook)
            ts = e.payload->on_read(hook, ts, index);
    }
    return ts;
}

TimexRequest PayloadChain::dispatch_adj(HookPoint hook, TimexRequest req)
{
    if (is_read_hook(hook))
        throw std::invalid_argument("dispatch_adj on read hook " + std::string(to_string(hook)));
    const std::uint64_t index = calls_[static_cast<std::size_t>(hook)]++;
    for (auto& e : entries_) {
        if (e.active && e.hook == hook)
            req = e.payload->on_adj(hook, req, index);
    }
    return req;
}

void PayloadChain::update_activation(std::int64_t run_time_ns, bool servos_locked)
{
    if (run_time_ns < 0)
        return;
    for (auto& e : entries_) {
        if (e.active)
            continue;
        switch (e.activation.kind) {
        case Activation::Kind::Immediate:
            e.active = true;
            break;
        case Activation::Kind::AtTime:
            e.active = run_time_ns >= e.activation.at_ns;
            break;
        case Activation::Kind::OnLock:
            e.active = servos_locked;
            break;
        }
        if (e.active)
            e.activated_at = run_time_ns;
    }
}

SimTime ClockBoundary::clock_gettime(const SimClock& clock, SimTime true_now)
{
    const SimTime raw = clock.read_raw(true_now);
    if (!chain_)
        return raw;
    const auto hook = read_hook_for(clock.id());
    return hook ? chain_->dispatch_read(*hook, raw) : raw;
}

void ClockBoundary::clock_adjtime(SimClock& clock, const TimexRequest& req)
{
    TimexRequest applied = req;
    if (chain_) {
        if (const auto hook = adj_hook_for(clock.id(), req.mode))
            applied = chain_->dispatch_adj(*hook, req);
    }
    if (applied.mode == TimexRequest::Mode::Frequency)
        clock.adj_frequency_raw(applied.freq_scaled_ppm);
    else
        clock.adj_setoffset_raw(applied);
}

}  // namespace ptpsim
