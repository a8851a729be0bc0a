#include "ptpsim/attacks.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ptpsim {

ConstantOffsetPayload::ConstantOffsetPayload(std::int64_t delta_ns, Variant variant,
                                             std::shared_ptr<Ledger> ledger)
    : delta_ns_(delta_ns), variant_(variant), ledger_(std::move(ledger))
{
}

bool ConstantOffsetPayload::accepts(HookPoint hook) const
{
    return variant_ == Variant::ReadShift ? is_read_hook(hook) : is_setoffset_hook(hook);
}

std::string ConstantOffsetPayload::describe() const
{
    std::ostringstream os;
    os << "constant(" << (variant_ == Variant::ReadShift ? "READ_SHIFT" : "STEP_TAMPER")
       << ", delta=" << delta_ns_ << "ns)";
    return os.str();
}

SimTime ConstantOffsetPayload::on_read(HookPoint, SimTime raw, std::uint64_t)
{
    return variant_ == Variant::ReadShift ? raw + delta_ns_ : raw;
}

TimexRequest ConstantOffsetPayload::on_adj(HookPoint, TimexRequest req, std::uint64_t)
{
    if (variant_ != Variant::StepTamper || req.mode != TimexRequest::Mode::SetOffset)
        return req;
    if (ledger_)
        ledger_->injected_ns += delta_ns_;
    return encode_step(req.step_total_ns() + delta_ns_);
}

StepConcealPayload::StepConcealPayload(std::shared_ptr<const ConstantOffsetPayload::Ledger> ledger)
    : ledger_(std::move(ledger))
{
    if (!ledger_)
        throw std::invalid_argument("StepConcealPayload needs a tamper ledger");
}

SimTime StepConcealPayload::on_read(HookPoint, SimTime raw, std::uint64_t)
{
    return raw - ledger_->injected_ns;
}

ProgressiveSkewPayload::ProgressiveSkewPayload(std::int64_t kappa_ppb, Variant variant, double factor)
    : kappa_ppb_(kappa_ppb), variant_(variant), factor_(factor)
{
    if (variant_ == Variant::FreqBiasMult && !std::isfinite(factor_))
        throw std::invalid_argument("skew factor must be finite");
}

std::string ProgressiveSkewPayload::describe() const
{
    std::ostringstream os;
    if (variant_ == Variant::FreqBiasAdd)
        os << "skew(FREQ_BIAS_ADD, kappa=" << kappa_ppb_ << "ppb)";
    else
        os << "skew(FREQ_BIAS_MULT, factor=" << factor_ << ")";
    return os.str();
}

TimexRequest ProgressiveSkewPayload::on_adj(HookPoint, TimexRequest req, std::uint64_t)
{
    if (req.mode != TimexRequest::Mode::Frequency)
        return req;
    if (variant_ == Variant::FreqBiasAdd)
        req.freq_scaled_ppm += ppb_to_scaled_ppm(kappa_ppb_);
    else
        req.freq_scaled_ppm = std::llround(static_cast<double>(req.freq_scaled_ppm) * factor_);
    return req;
}

SimTime SkewConcealPayload::on_read(HookPoint, SimTime raw, std::uint64_t)
{
    if (!origin_)
        origin_ = raw;
    __extension__ using i128 = __int128;
    const i128 hidden = static_cast<i128>(raw - *origin_) * kappa_ppb_ / kNsPerSec;
    return raw - static_cast<std::int64_t>(hidden);
}

RandomJitterPayload::RandomJitterPayload(std::int64_t sigma_ns, std::int64_t period_n,
                                         NoiseDistribution distribution, RngStream rng)
    : sigma_ns_(sigma_ns), period_n_(period_n), distribution_(distribution), rng_(std::move(rng))
{
    if (sigma_ns_ < 0)
        throw std::invalid_argument("jitter sigma must be non-negative");
    if (period_n_ < 1)
        throw std::invalid_argument("jitter period N must be >= 1");
}

std::string RandomJitterPayload::describe() const
{
    std::ostringstream os;
    os << "jitter(" << (distribution_ == NoiseDistribution::Gaussian ? "GAUSSIAN" : "UNIFORM")
       << ", sigma=" << sigma_ns_ << "ns, N=" << period_n_ << ")";
    return os.str();
}

bool RandomJitterPayload::gate(std::uint64_t call_index) const
{
    return call_index % static_cast<std::uint64_t>(period_n_) == 0;
}

std::int64_t RandomJitterPayload::draw()
{
    ++injections_;
    const double unit = distribution_ == NoiseDistribution::Gaussian
                            ? rng_.gaussian()
                            : (2.0 * rng_.uniform01() - 1.0) * std::sqrt(3.0);
    return std::llround(unit * static_cast<double>(sigma_ns_));
}

SimTime RandomJitterPayload::on_read(HookPoint, SimTime raw, std::uint64_t call_index)
{
    if (sigma_ns_ == 0 || !gate(call_index))
        return raw;
    return raw + draw();
}

TimexRequest RandomJitterPayload::on_adj(HookPoint, TimexRequest req, std::uint64_t call_index)
{
    if (sigma_ns_ == 0 || req.mode != TimexRequest::Mode::Frequency || !gate(call_index))
        return req;
    req.freq_scaled_ppm += ppb_to_scaled_ppm(draw());
    return req;
}

}  // namespace ptpsim
