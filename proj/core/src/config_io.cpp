#include "ptpsim/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace ptpsim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class Reader {
public:
    std::vector<std::string> errors;

    bool is_object(const json& j, const std::string& path)
    {
        if (j.is_object())
            return true;
        errors.push_back(path + ": expected an object");
        return false;
    }

    void known_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys)
    {
        for (const auto& [k, v] : obj.items()) {
            bool found = false;
            for (auto key : keys)
                found = found || key == k;
            if (!found)
                errors.push_back(join(path, k) + ": unknown key");
        }
    }

    void integer(const json& obj, const std::string& path, const char* key, std::int64_t& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return;
        if (it->is_number_integer())
            out = it->get<std::int64_t>();
        else
            errors.push_back(join(path, key) + ": expected an integer");
    }

    void unsigned_integer(const json& obj, const std::string& path, const char* key, std::uint64_t& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return;
        if (it->is_number_unsigned())
            out = it->get<std::uint64_t>();
        else
            errors.push_back(join(path, key) + ": expected a non-negative integer");
    }

    void optional_integer(const json& obj, const std::string& path, const char* key,
                          std::optional<std::int64_t>& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return;
        if (it->is_null())
            out.reset();
        else if (it->is_number_integer())
            out = it->get<std::int64_t>();
        else
            errors.push_back(join(path, key) + ": expected an integer or null");
    }

    void number(const json& obj, const std::string& path, const char* key, double& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return;
        if (it->is_number())
            out = it->get<double>();
        else
            errors.push_back(join(path, key) + ": expected a number");
    }

    void boolean(const json& obj, const std::string& path, const char* key, bool& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return;
        if (it->is_boolean())
            out = it->get<bool>();
        else
            errors.push_back(join(path, key) + ": expected true or false");
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* key)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return std::nullopt;
        if (it->is_string())
            return it->get<std::string>();
        errors.push_back(join(path, key) + ": expected a string");
        return std::nullopt;
    }

    static std::string join(const std::string& path, std::string_view key)
    {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }
};

void read_clock(Reader& r, const json& j, const std::string& path, ClockParams& c)
{
    if (!r.is_object(j, path))
        return;
    r.known_keys(j, path, {"intrinsic_ppb", "initial_offset_ns", "max_freq_ppb"});
    r.integer(j, path, "intrinsic_ppb", c.intrinsic_ppb);
    r.integer(j, path, "initial_offset_ns", c.initial_offset_ns);
    r.integer(j, path, "max_freq_ppb", c.max_freq_ppb);
}

void read_servo(Reader& r, const json& j, const std::string& path, PiServoConfig& s)
{
    if (!r.is_object(j, path))
        return;
    r.known_keys(j, path, {"kp", "ki", "first_step_threshold_ns", "step_threshold_ns", "max_freq_ppb"});
    r.number(j, path, "kp", s.kp);
    r.number(j, path, "ki", s.ki);
    r.integer(j, path, "first_step_threshold_ns", s.first_step_threshold_ns);
    r.optional_integer(j, path, "step_threshold_ns", s.step_threshold_ns);
    r.integer(j, path, "max_freq_ppb", s.max_freq_ppb);
}

void read_activation(Reader& r, const json& obj, const std::string& path, Activation& a)
{
    const auto it = obj.find("activation");
    if (it == obj.end())
        return;
    const std::string field = path + ".activation";
    if (it->is_string()) {
        const auto s = it->get<std::string>();
        if (s == "on_lock")
            a = Activation::on_lock();
        else if (s == "immediate")
            a = Activation::immediate();
        else
            r.errors.push_back(field + ": expected \"on_lock\", \"immediate\" or {\"at_ns\": N}, got \"" + s + "\"");
    } else if (it->is_number_integer()) {
        a = Activation::at(it->get<std::int64_t>());
    } else if (it->is_object()) {
        r.known_keys(*it, field, {"at_ns"});
        std::int64_t at = 0;
        if (!it->contains("at_ns"))
            r.errors.push_back(field + ".at_ns: required");
        r.integer(*it, field, "at_ns", at);
        a = Activation::at(at);
    } else {
        r.errors.push_back(field + ": expected \"on_lock\", \"immediate\" or {\"at_ns\": N}");
    }
}

void read_hook(Reader& r, const json& obj, const std::string& path, HookPoint& hook)
{
    if (auto s = r.string(obj, path, "hook")) {
        if (auto h = hook_from_string(*s))
            hook = *h;
        else
            r.errors.push_back(path + ".hook: unknown hook '" + *s + "'");
    }
}

PayloadSpec read_payload(Reader& r, const json& j, const std::string& path)
{
    PayloadSpec p;
    if (!r.is_object(j, path))
        return p;
    const auto type = r.string(j, path, "type");
    if (!type) {
        if (!j.contains("type"))
            r.errors.push_back(path + ".type: required");
        return p;
    }

    if (*type == "constant") {
        p.type = PayloadSpec::Type::Constant;
        r.known_keys(j, path, {"type", "hook", "activation", "delta_ns", "variant", "conceal"});
        if (auto v = r.string(j, path, "variant")) {
            if (*v == "READ_SHIFT")
                p.constant_variant = ConstantOffsetPayload::Variant::ReadShift;
            else if (*v == "STEP_TAMPER")
                p.constant_variant = ConstantOffsetPayload::Variant::StepTamper;
            else
                r.errors.push_back(path + ".variant: expected READ_SHIFT or STEP_TAMPER, got '" + *v + "'");
        }
        p.hook = p.constant_variant == ConstantOffsetPayload::Variant::StepTamper ? HookPoint::SetOffsetPhc
                                                                                   : HookPoint::ReadSys;
        r.integer(j, path, "delta_ns", p.delta_ns);
    } else if (*type == "skew") {
        p.type = PayloadSpec::Type::Skew;
        p.hook = HookPoint::AdjFreqSys;
        r.known_keys(j, path, {"type", "hook", "activation", "kappa_ppb", "variant", "factor", "conceal"});
        if (auto v = r.string(j, path, "variant")) {
            if (*v == "FREQ_BIAS_ADD")
                p.skew_variant = ProgressiveSkewPayload::Variant::FreqBiasAdd;
            else if (*v == "FREQ_BIAS_MULT")
                p.skew_variant = ProgressiveSkewPayload::Variant::FreqBiasMult;
            else
                r.errors.push_back(path + ".variant: expected FREQ_BIAS_ADD or FREQ_BIAS_MULT, got '" + *v + "'");
        }
        r.integer(j, path, "kappa_ppb", p.kappa_ppb);
        r.number(j, path, "factor", p.factor);
    } else if (*type == "jitter") {
        p.type = PayloadSpec::Type::Jitter;
        p.hook = HookPoint::ReadSys;
        r.known_keys(j, path, {"type", "hook", "activation", "sigma_ns", "period_n", "distribution"});
        r.integer(j, path, "sigma_ns", p.sigma_ns);
        r.integer(j, path, "period_n", p.period_n);
        if (auto d = r.string(j, path, "distribution")) {
            if (*d == "GAUSSIAN")
                p.distribution = NoiseDistribution::Gaussian;
            else if (*d == "UNIFORM")
                p.distribution = NoiseDistribution::Uniform;
            else
                r.errors.push_back(path + ".distribution: expected GAUSSIAN or UNIFORM, got '" + *d + "'");
        }
    } else {
        r.errors.push_back(path + ".type: unknown payload type '" + *type + "'");
        return p;
    }
    read_hook(r, j, path, p.hook);
    read_activation(r, j, path, p.activation);
    r.boolean(j, path, "conceal", p.conceal);
    return p;
}

ordered_json activation_json(const Activation& a)
{
    switch (a.kind) {
    case Activation::Kind::Immediate: return "immediate";
    case Activation::Kind::OnLock: return "on_lock";
    case Activation::Kind::AtTime: return ordered_json{{"at_ns", a.at_ns}};
    }
    return nullptr;
}

ordered_json clock_json(const ClockParams& c)
{
    return ordered_json{{"intrinsic_ppb", c.intrinsic_ppb},
                        {"initial_offset_ns", c.initial_offset_ns},
                        {"max_freq_ppb", c.max_freq_ppb}};
}

ordered_json servo_json(const PiServoConfig& s)
{
    ordered_json j{{"kp", s.kp}, {"ki", s.ki}, {"first_step_threshold_ns", s.first_step_threshold_ns}};
    j["step_threshold_ns"] = s.step_threshold_ns ? ordered_json(*s.step_threshold_ns) : ordered_json(nullptr);
    j["max_freq_ppb"] = s.max_freq_ppb;
    return j;
}

ordered_json payload_json(const PayloadSpec& p)
{
    ordered_json j;
    j["type"] = std::string(to_string(p.type));
    j["hook"] = std::string(to_string(p.hook));
    j["activation"] = activation_json(p.activation);
    switch (p.type) {
    case PayloadSpec::Type::Constant:
        j["variant"] = p.constant_variant == ConstantOffsetPayload::Variant::ReadShift ? "READ_SHIFT" : "STEP_TAMPER";
        j["delta_ns"] = p.delta_ns;
        j["conceal"] = p.conceal;
        break;
    case PayloadSpec::Type::Skew:
        j["variant"] = p.skew_variant == ProgressiveSkewPayload::Variant::FreqBiasAdd ? "FREQ_BIAS_ADD" : "FREQ_BIAS_MULT";
        j["kappa_ppb"] = p.kappa_ppb;
        j["factor"] = p.factor;
        j["conceal"] = p.conceal;
        break;
    case PayloadSpec::Type::Jitter:
        j["sigma_ns"] = p.sigma_ns;
        j["period_n"] = p.period_n;
        j["distribution"] = p.distribution == NoiseDistribution::Gaussian ? "GAUSSIAN" : "UNIFORM";
        break;
    }
    return j;
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("json: ") + e.what()});
    }

    Reader r;
    if (!r.is_object(doc, "(document)"))
        throw ConfigError(std::move(r.errors));

    ScenarioConfig c;
    if (auto base = r.string(doc, "", "base")) {
        try {
            c = builtin_scenario(*base);
        } catch (const ConfigError&) {
            throw ConfigError({"base: unknown builtin '" + *base + "'"});
        }
    }

    r.known_keys(doc, "", {"base", "name", "duration_s", "warmup_s", "seed", "clocks", "path", "servo", "rdelay_ns",
                           "observe", "payloads", "bypass_interception", "analysis", "output_dir"});
    if (auto name = r.string(doc, "", "name"))
        c.name = *name;
    r.integer(doc, "", "duration_s", c.duration_s);
    r.integer(doc, "", "warmup_s", c.warmup_s);
    r.unsigned_integer(doc, "", "seed", c.seed);
    r.integer(doc, "", "rdelay_ns", c.rdelay_ns);
    r.boolean(doc, "", "bypass_interception", c.bypass_interception);
    if (auto out = r.string(doc, "", "output_dir"))
        c.output_dir = *out;

    if (auto obs = r.string(doc, "", "observe")) {
        if (*obs == "SYSTEM")
            c.observed = ClockId::System;
        else if (*obs == "PHC")
            c.observed = ClockId::Phc;
        else
            r.errors.push_back("observe: expected SYSTEM or PHC, got '" + *obs + "'");
    }

    if (auto it = doc.find("clocks"); it != doc.end() && r.is_object(*it, "clocks")) {
        r.known_keys(*it, "clocks", {"master", "phc", "sys"});
        if (it->contains("master"))
            read_clock(r, (*it)["master"], "clocks.master", c.master);
        if (it->contains("phc"))
            read_clock(r, (*it)["phc"], "clocks.phc", c.phc);
        if (it->contains("sys"))
            read_clock(r, (*it)["sys"], "clocks.sys", c.sys);
    }

    if (auto it = doc.find("path"); it != doc.end() && r.is_object(*it, "path")) {
        r.known_keys(*it, "path", {"delay_ms_ns", "delay_sm_ns", "jitter_std_ns", "turnaround_ns"});
        r.integer(*it, "path", "delay_ms_ns", c.path.delay_ms_ns);
        r.integer(*it, "path", "delay_sm_ns", c.path.delay_sm_ns);
        r.integer(*it, "path", "jitter_std_ns", c.path.jitter_std_ns);
        r.integer(*it, "path", "turnaround_ns", c.path.turnaround_ns);
    }

    if (auto it = doc.find("servo"); it != doc.end() && r.is_object(*it, "servo")) {
        r.known_keys(*it, "servo", {"ptp4l", "phc2sys"});
        if (it->contains("ptp4l"))
            read_servo(r, (*it)["ptp4l"], "servo.ptp4l", c.ptp4l);
        if (it->contains("phc2sys"))
            read_servo(r, (*it)["phc2sys"], "servo.phc2sys", c.phc2sys);
    }

    if (auto it = doc.find("payloads"); it != doc.end()) {
        if (!it->is_array()) {
            r.errors.emplace_back("payloads: expected an array");
        } else {
            c.payloads.clear();
            for (std::size_t i = 0; i < it->size(); ++i)
                c.payloads.push_back(read_payload(r, (*it)[i], "payloads[" + std::to_string(i) + "]"));
        }
    }

    if (auto it = doc.find("analysis"); it != doc.end() && r.is_object(*it, "analysis")) {
        r.known_keys(*it, "analysis",
                     {"steady_start_s", "slope_start_s", "stealth_start_s", "filter_threshold_ns", "drift_spec_ppb"});
        r.integer(*it, "analysis", "steady_start_s", c.analysis.steady_start_s);
        r.integer(*it, "analysis", "slope_start_s", c.analysis.slope_start_s);
        r.integer(*it, "analysis", "stealth_start_s", c.analysis.stealth_start_s);
        r.integer(*it, "analysis", "filter_threshold_ns", c.analysis.filter_threshold_ns);
        r.integer(*it, "analysis", "drift_spec_ppb", c.analysis.drift_spec_ppb);
    }

    if (r.errors.empty()) {
        auto semantic = validate(c);
        r.errors.insert(r.errors.end(), semantic.begin(), semantic.end());
    }
    if (!r.errors.empty())
        throw ConfigError(std::move(r.errors));
    return c;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError({"file: cannot open '" + path + "'"});
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string to_json(const ScenarioConfig& c)
{
    ordered_json j;
    j["name"] = c.name;
    j["duration_s"] = c.duration_s;
    j["warmup_s"] = c.warmup_s;
    j["seed"] = c.seed;
    j["clocks"] = ordered_json{{"master", clock_json(c.master)}, {"phc", clock_json(c.phc)}, {"sys", clock_json(c.sys)}};
    j["path"] = ordered_json{{"delay_ms_ns", c.path.delay_ms_ns},
                             {"delay_sm_ns", c.path.delay_sm_ns},
                             {"jitter_std_ns", c.path.jitter_std_ns},
                             {"turnaround_ns", c.path.turnaround_ns}};
    j["servo"] = ordered_json{{"ptp4l", servo_json(c.ptp4l)}, {"phc2sys", servo_json(c.phc2sys)}};
    j["rdelay_ns"] = c.rdelay_ns;
    j["observe"] = std::string(to_string(c.observed));
    j["payloads"] = ordered_json::array();
    for (const auto& p : c.payloads)
        j["payloads"].push_back(payload_json(p));
    j["bypass_interception"] = c.bypass_interception;
    j["analysis"] = ordered_json{{"steady_start_s", c.analysis.steady_start_s},
                                 {"slope_start_s", c.analysis.slope_start_s},
                                 {"stealth_start_s", c.analysis.stealth_start_s},
                                 {"filter_threshold_ns", c.analysis.filter_threshold_ns},
                                 {"drift_spec_ppb", c.analysis.drift_spec_ppb}};
    if (c.output_dir)
        j["output_dir"] = *c.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace ptpsim
