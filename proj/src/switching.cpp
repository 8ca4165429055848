#include "spdde/switching.hpp"

#include "spdde/error.hpp"

#include <algorithm>
#include <cmath>

namespace spdde {

SwitchingSignal::SwitchingSignal(ModeIndex p0, std::vector<SwitchEvent> switches,
                                 std::optional<AdtParameters> adt)
    : p0_(p0), switches_(std::move(switches)), adt_(adt) {
    ModeIndex current = p0_;
    double last = 0.0;
    for (const SwitchEvent& ev : switches_) {
        if (!std::isfinite(ev.time) || !(ev.time > last)) {
            throw Error(ErrorKind::invalid_parameter,
                        "switch instants must be finite, positive and strictly increasing");
        }
        if (ev.index == current) {
            throw Error(ErrorKind::invalid_parameter, "consecutive indices of a signal must differ");
        }
        current = ev.index;
        last = ev.time;
    }
    if (adt_ && (!(adt_->tau_a > 0.0) || !(adt_->n0 >= 1.0))) {
        throw Error(ErrorKind::invalid_parameter, "ADT metadata needs tau_a > 0 and N0 >= 1");
    }
}

std::vector<double> SwitchingSignal::instants() const {
    std::vector<double> out;
    out.reserve(switches_.size());
    for (const SwitchEvent& ev : switches_) out.push_back(ev.time);
    return out;
}

ModeIndex SwitchingSignal::index_at(double t) const {
    if (!(t >= 0.0)) throw Error(ErrorKind::range, "index_at needs t >= 0");
    auto it = std::upper_bound(switches_.begin(), switches_.end(), t,
                               [](double v, const SwitchEvent& ev) { return v < ev.time; });
    if (it == switches_.begin()) return p0_;
    return std::prev(it)->index;
}

std::size_t SwitchingSignal::switch_count(double t1, double t2) const {
    if (!(t1 >= 0.0) || !(t2 > t1)) throw Error(ErrorKind::range, "switch_count needs t2 > t1 >= 0");
    auto by_time = [](const SwitchEvent& ev, double v) { return ev.time < v; };
    auto lo = std::lower_bound(switches_.begin(), switches_.end(), t1, by_time);
    auto hi = std::lower_bound(switches_.begin(), switches_.end(), t2, by_time);
    return static_cast<std::size_t>(hi - lo);
}

namespace {

constexpr double kAdtSlack = 1e-9;

double adt_allowance(double n0, double length, double tau_a) {
    return n0 + length / tau_a;
}

}  // namespace

AdtVerdict verify_adt(const SwitchingSignal& sig, double tau_a, double n0) {
    if (!(tau_a > 0.0) || !(n0 >= 1.0)) {
        throw Error(ErrorKind::invalid_parameter, "verify_adt needs tau_a > 0 and N0 >= 1");
    }
    const auto t = sig.instants();
    AdtVerdict verdict;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i; j < t.size(); ++j) {
            const auto count = j - i + 1;
            const double allowed = adt_allowance(n0, t[j] - t[i], tau_a);
            if (static_cast<double>(count) > allowed + kAdtSlack * std::max(1.0, allowed)) {
                verdict.holds = false;
                verdict.first_violation = AdtWindow{t[i], t[j], count, allowed};
                return verdict;
            }
        }
    }
    return verdict;
}

SwitchingSignal generate_adt_signal(const std::vector<ModeIndex>& index_set, double tau_a, double n0,
                                    double horizon, double grid_step, RngStream& rng) {
    if (!(tau_a > 0.0) || !(n0 >= 1.0)) {
        throw Error(ErrorKind::generation, "ADT generation needs tau_a > 0 and N0 >= 1");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorKind::generation, "ADT generation needs a positive finite horizon");
    }
    if (index_set.empty()) throw Error(ErrorKind::generation, "ADT generation needs a non-empty index set");
    std::vector<ModeIndex> indices = index_set;
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

    const ModeIndex p0 = indices[static_cast<std::size_t>(rng.uniform() * indices.size()) % indices.size()];
    std::vector<SwitchEvent> switches;
    if (indices.size() < 2) return SwitchingSignal(p0, {}, AdtParameters{tau_a, n0});

    auto snap_up = [grid_step](double t) {
        if (grid_step <= 0.0) return t;
        return std::ceil(t / grid_step - 1e-9) * grid_step;
    };

    ModeIndex current = p0;
    double last = 0.0;
    while (true) {
        double t = last + rng.exponential(tau_a);
        // Earliest time at which one more switch keeps every window [tau_i, t] within budget.
        const std::size_t j = switches.size();
        for (std::size_t i = 0; i < j; ++i) {
            const double count = static_cast<double>(j - i + 1);
            if (count > n0) t = std::max(t, switches[i].time + tau_a * (count - n0));
        }
        t = snap_up(t);
        if (grid_step > 0.0 && t <= last) t = last + grid_step;
        if (!(t > last)) t = std::nextafter(last, horizon + 1.0);
        if (t >= horizon) break;

        const auto pick = static_cast<std::size_t>(rng.uniform() * (indices.size() - 1)) % (indices.size() - 1);
        std::size_t slot = 0;
        ModeIndex next = current;
        for (ModeIndex candidate : indices) {
            if (candidate == current) continue;
            if (slot++ == pick) {
                next = candidate;
                break;
            }
        }
        switches.push_back({t, next});
        current = next;
        last = t;
    }
    return SwitchingSignal(p0, std::move(switches), AdtParameters{tau_a, n0});
}

std::vector<std::pair<double, double>> fixed_index_pairs(const SwitchingSignal& sig, ModeIndex p,
                                                         double horizon) {
    std::vector<double> activations;
    if (sig.initial_index() == p) activations.push_back(0.0);
    for (const SwitchEvent& ev : sig.switches()) {
        if (ev.time > horizon) break;
        if (ev.index == p) activations.push_back(ev.time);
    }
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 1; i < activations.size(); ++i) {
        pairs.emplace_back(activations[i - 1], activations[i]);
    }
    return pairs;
}

nlohmann::json signal_to_json(const SwitchingSignal& sig) {
    nlohmann::json j;
    j["p0"] = sig.initial_index();
    nlohmann::json list = nlohmann::json::array();
    for (const SwitchEvent& ev : sig.switches()) list.push_back({{"time", ev.time}, {"index", ev.index}});
    j["switches"] = list;
    if (sig.adt()) j["adt"] = {{"tau_a", sig.adt()->tau_a}, {"n0", sig.adt()->n0}};
    return j;
}

SwitchingSignal signal_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::config, "signal record must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "p0" && key != "switches" && key != "adt") {
            throw Error(ErrorKind::config, "unknown key in signal record: " + key);
        }
    }
    if (!j.contains("p0")) throw Error(ErrorKind::config, "signal record needs p0");
    std::vector<SwitchEvent> switches;
    if (j.contains("switches")) {
        for (const auto& ev : j.at("switches")) {
            for (const auto& [key, _] : ev.items()) {
                if (key != "time" && key != "index") {
                    throw Error(ErrorKind::config, "unknown key in switch event: " + key);
                }
            }
            switches.push_back({ev.at("time").get<double>(), ev.at("index").get<ModeIndex>()});
        }
    }
    std::optional<AdtParameters> adt;
    if (j.contains("adt")) {
        const auto& a = j.at("adt");
        for (const auto& [key, _] : a.items()) {
            if (key != "tau_a" && key != "n0") throw Error(ErrorKind::config, "unknown key in adt: " + key);
        }
        adt = AdtParameters{a.at("tau_a").get<double>(), a.at("n0").get<double>()};
    }
    return SwitchingSignal(j.at("p0").get<ModeIndex>(), std::move(switches), adt);
}

}  // namespace spdde
