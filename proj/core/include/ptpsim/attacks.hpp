#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ptpsim/interception.hpp"
#include "ptpsim/rng.hpp"

namespace ptpsim {

/// Fixed bias. READ_SHIFT rewrites clock_gettime() results to t + delta;
/// STEP_TAMPER adds delta to the step carried by ADJ_SETOFFSET.
class ConstantOffsetPayload final : public Payload {
public:
    enum class Variant { ReadShift, StepTamper };

    /// Phase the attacker has injected through tampered steps, shared with a
    /// concealment payload so later reads can hide it.
    struct Ledger {
        std::int64_t injected_ns = 0;
    };

    ConstantOffsetPayload(std::int64_t delta_ns, Variant variant,
                          std::shared_ptr<Ledger> ledger = nullptr);

    std::string_view kind() const override { return "constant"; }
    bool accepts(HookPoint hook) const override;
    std::string describe() const override;

    SimTime on_read(HookPoint hook, SimTime raw, std::uint64_t call_index) override;
    TimexRequest on_adj(HookPoint hook, TimexRequest req, std::uint64_t call_index) override;

    std::int64_t delta_ns() const { return delta_ns_; }
    Variant variant() const { return variant_; }

private:
    std::int64_t delta_ns_;
    Variant variant_;
    std::shared_ptr<Ledger> ledger_;
};

/// Subtracts whatever a StepTamper payload has injected so far from reads of
/// the tampered clock.
class StepConcealPayload final : public Payload {
public:
    explicit StepConcealPayload(std::shared_ptr<const ConstantOffsetPayload::Ledger> ledger);

    std::string_view kind() const override { return "step_conceal"; }
    bool accepts(HookPoint hook) const override { return is_read_hook(hook); }

    SimTime on_read(HookPoint hook, SimTime raw, std::uint64_t call_index) override;

private:
    std::shared_ptr<const ConstantOffsetPayload::Ledger> ledger_;
};

/// Frequency bias on ADJ_FREQUENCY requests. FreqBiasAdd adds kappa_ppb to
/// every request; FreqBiasMult scales the requested value by `factor`.
class ProgressiveSkewPayload final : public Payload {
public:
    enum class Variant { FreqBiasAdd, FreqBiasMult };

    ProgressiveSkewPayload(std::int64_t kappa_ppb, Variant variant = Variant::FreqBiasAdd,
                           double factor = 1.0);

    std::string_view kind() const override { return "skew"; }
    bool accepts(HookPoint hook) const override { return is_freq_hook(hook); }
    std::string describe() const override;

    TimexRequest on_adj(HookPoint hook, TimexRequest req, std::uint64_t call_index) override;

    std::int64_t kappa_ppb() const { return kappa_ppb_; }
    Variant variant() const { return variant_; }
    double factor() const { return factor_; }

private:
    std::int64_t kappa_ppb_;
    Variant variant_;
    double factor_;
};

/// Read-side companion of an additive skew: hides the phase a kappa_ppb
/// frequency bias has accumulated since this payload's first call, so the
/// victim's servo never sees the drift it would otherwise cancel.
class SkewConcealPayload final : public Payload {
public:
    explicit SkewConcealPayload(std::int64_t kappa_ppb) : kappa_ppb_(kappa_ppb) {}

    std::string_view kind() const override { return "skew_conceal"; }
    bool accepts(HookPoint hook) const override { return is_read_hook(hook); }

    SimTime on_read(HookPoint hook, SimTime raw, std::uint64_t call_index) override;

private:
    std::int64_t kappa_ppb_;
    std::optional<SimTime> origin_;
};

enum class NoiseDistribution { Gaussian, Uniform };

/// Zero-mean noise with standard deviation sigma, injected on every call
/// whose per-hook index is a multiple of N. On reads the noise is in ns; on
/// ADJ_FREQUENCY it is in ppb (one second of sigma ns per 1 Hz interval).
class RandomJitterPayload final : public Payload {
public:
    RandomJitterPayload(std::int64_t sigma_ns, std::int64_t period_n, NoiseDistribution distribution,
                        RngStream rng);

    std::string_view kind() const override { return "jitter"; }
    bool accepts(HookPoint hook) const override { return is_read_hook(hook) || is_freq_hook(hook); }
    std::string describe() const override;

    SimTime on_read(HookPoint hook, SimTime raw, std::uint64_t call_index) override;
    TimexRequest on_adj(HookPoint hook, TimexRequest req, std::uint64_t call_index) override;

    std::int64_t sigma_ns() const { return sigma_ns_; }
    std::int64_t period_n() const { return period_n_; }
    std::uint64_t injections() const { return injections_; }

private:
    bool gate(std::uint64_t call_index) const;
    std::int64_t draw();

    std::int64_t sigma_ns_;
    std::int64_t period_n_;
    NoiseDistribution distribution_;
    RngStream rng_;
    std::uint64_t injections_ = 0;
};

}  // namespace ptpsim
