#include "wptsim/harvester.hpp"

#include <algorithm>
#include <cmath>
#include <istream>

#include "wptsim/csv.hpp"
#include "wptsim/errors.hpp"

namespace wptsim {

EfficiencyCurve::EfficiencyCurve(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) throw InvalidArgument("EfficiencyCurve: empty curve");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.p_rf_w > 0.0) || !std::isfinite(p.p_rf_w))
            throw InvalidArgument("EfficiencyCurve: RF powers must be positive and finite");
        if (!(p.p_dc_w >= 0.0) || p.p_dc_w > p.p_rf_w)
            throw InvalidArgument("EfficiencyCurve: DC output must satisfy 0 <= p_dc <= p_rf");
        if (i > 0) {
            if (!(points_[i - 1].p_rf_w < p.p_rf_w))
                throw InvalidArgument("EfficiencyCurve: RF powers must be strictly increasing");
            if (points_[i - 1].p_dc_w > p.p_dc_w)
                throw InvalidArgument("EfficiencyCurve: DC output must be non-decreasing");
        }
    }
}

// Testbed harvester characterization: mean RF input vs mean DC output in
// watts at the eleven calibrated transmitter gain settings (75..85 dB).
const EfficiencyCurve& EfficiencyCurve::testbed_single_tone() {
    static const EfficiencyCurve curve{{
        {3.3811171551552e-6, 0.563309137141809e-6},
        {3.832819324565e-6, 0.617264728440383e-6},
        {5.17649837949025e-6, 1.19676419772738e-6},
        {6.48721963079147e-6, 1.62401733676224e-6},
        {7.85706322014636e-6, 2.42358335144312e-6},
        {10.5238226401887e-6, 3.41778224120492e-6},
        {12.4856654643546e-6, 4.62544215112466e-6},
        {15.1302972269924e-6, 6.1594953739722e-6},
        {16.5619840572225e-6, 6.88141549103359e-6},
        {21.0765063168423e-6, 10.2900477634388e-6},
        {24.6765328148914e-6, 12.5641747503154e-6},
    }};
    return curve;
}

const EfficiencyCurve& EfficiencyCurve::testbed_multi_tone() {
    static const EfficiencyCurve curve{{
        {3.1382763220479e-6, 0.456691991671377e-6},
        {3.84886589919538e-6, 0.63950951171412e-6},
        {4.81378016660812e-6, 0.921566281708466e-6},
        {6.04560337368143e-6, 1.26602254753809e-6},
        {7.3304940846566e-6, 1.66476190894102e-6},
        {9.38295576066426e-6, 2.14176685947878e-6},
        {11.3880508544913e-6, 2.63355270233796e-6},
        {13.9698884109967e-6, 3.10860562078332e-6},
        {17.0795044737649e-6, 3.8525379597825e-6},
        {21.0162069983013e-6, 6.26595860409853e-6},
        {25.0036933829554e-6, 8.04211120327822e-6},
    }};
    return curve;
}

EfficiencyCurve EfficiencyCurve::from_csv(std::istream& in) {
    const auto table = csv::read_table(in, {"p_rf_w", "p_dc_w"});
    std::vector<Point> points;
    points.reserve(table.rows.size());
    for (const auto& row : table.rows) points.push_back({row[0], row[1]});
    return EfficiencyCurve(std::move(points));
}

double EfficiencyCurve::dc_output_w(double p_rf_w) const {
    if (!(p_rf_w >= 0.0)) throw InvalidArgument("dc_output_w: RF power must be non-negative");
    if (p_rf_w < points_.front().p_rf_w) return 0.0;
    const auto& last = points_.back();
    if (p_rf_w == last.p_rf_w) return last.p_dc_w;
    if (p_rf_w > last.p_rf_w) return p_rf_w * (last.p_dc_w / last.p_rf_w);

    auto hi = std::upper_bound(points_.begin(), points_.end(), p_rf_w,
                               [](double v, const Point& p) { return v < p.p_rf_w; });
    const Point& b = *hi;
    const Point& a = *(hi - 1);
    if (p_rf_w == a.p_rf_w) return a.p_dc_w;
    if (a.p_dc_w == 0.0 || b.p_dc_w == 0.0) {
        // log-log is undefined through zero; fall back to linear for the segment
        const double w = (p_rf_w - a.p_rf_w) / (b.p_rf_w - a.p_rf_w);
        return a.p_dc_w + w * (b.p_dc_w - a.p_dc_w);
    }
    const double w = (std::log(p_rf_w) - std::log(a.p_rf_w)) /
                     (std::log(b.p_rf_w) - std::log(a.p_rf_w));
    return std::exp(std::log(a.p_dc_w) + w * (std::log(b.p_dc_w) - std::log(a.p_dc_w)));
}

HarvesterModel HarvesterModel::measured(EfficiencyCurve curve) {
    HarvesterModel m;
    m.mode = std::move(curve);
    m.validate();
    return m;
}

HarvesterModel HarvesterModel::parametric(double sensitivity_w, double peak_efficiency,
                                          double saturation_w) {
    HarvesterModel m;
    m.mode = ParametricHarvester{sensitivity_w, peak_efficiency, saturation_w};
    m.validate();
    return m;
}

void HarvesterModel::validate() const {
    if (!(v_max_v > 0.0)) throw InvalidArgument("harvester: v_max must be positive");
    if (!(averaging_window_s > 0.0))
        throw InvalidArgument("harvester: averaging window must be positive");
    if (!(load_resistance_ohm > 0.0))
        throw InvalidArgument("harvester: load resistance must be positive");
    if (const auto* p = std::get_if<ParametricHarvester>(&mode)) {
        if (!(p->sensitivity_w > 0.0) || !(p->sensitivity_w < p->saturation_w))
            throw InvalidArgument("harvester: need 0 < sensitivity < saturation");
        if (!(p->peak_efficiency > 0.0 && p->peak_efficiency <= 1.0))
            throw InvalidArgument("harvester: peak efficiency must lie in (0, 1]");
    }
}

namespace {

double parametric_dc(const ParametricHarvester& h, double p_rf_w) {
    if (p_rf_w <= h.sensitivity_w) return 0.0;
    if (p_rf_w >= h.saturation_w) return h.peak_efficiency * h.saturation_w;
    // smoothstep ramp of efficiency in the log-power domain
    const double u = std::log(p_rf_w / h.sensitivity_w) / std::log(h.saturation_w / h.sensitivity_w);
    const double eta = h.peak_efficiency * u * u * (3.0 - 2.0 * u);
    return eta * p_rf_w;
}

}  // namespace

double rf_to_dc(const HarvesterModel& model, double p_rf_w) {
    if (!(p_rf_w >= 0.0)) throw InvalidArgument("rf_to_dc: RF power must be non-negative");
    if (const auto* curve = std::get_if<EfficiencyCurve>(&model.mode))
        return curve->dc_output_w(p_rf_w);
    return parametric_dc(std::get<ParametricHarvester>(model.mode), p_rf_w);
}

double harvester_voltage(const HarvesterModel& model, double p_dc_w, double load_resistance_ohm) {
    if (!(p_dc_w >= 0.0)) throw InvalidArgument("harvester_voltage: power must be non-negative");
    if (!(load_resistance_ohm > 0.0))
        throw InvalidArgument("harvester_voltage: load resistance must be positive");
    return std::min(std::sqrt(p_dc_w * load_resistance_ohm), model.v_max_v);
}

double HarvestTrace::mean_dc_w() const {
    if (p_eh_w.empty()) throw InvalidArgument("empty harvest trace has no mean");
    double acc = 0.0;
    for (double p : p_eh_w) acc += p;
    return acc / static_cast<double>(p_eh_w.size());
}

HarvestTrace harvest_envelope(const HarvesterModel& model, const PowerEnvelope& env) {
    model.validate();
    env.validate();
    if (env.samples_w.empty()) throw InvalidArgument("harvest_envelope: empty envelope");

    const auto window = static_cast<std::size_t>(
        std::max<std::int64_t>(1, std::llround(model.averaging_window_s * env.sample_rate_hz)));
    HarvestTrace trace;
    trace.sample_rate_hz = env.sample_rate_hz / static_cast<double>(window);
    trace.start_time_s = env.start_time_s;
    const std::size_t n_windows = (env.samples_w.size() + window - 1) / window;
    trace.p_eh_w.reserve(n_windows);
    trace.v_eh_v.reserve(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t begin = w * window;
        const std::size_t end = std::min(begin + window, env.samples_w.size());
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += rf_to_dc(model, env.samples_w[i]);
        const double p_eh = acc / static_cast<double>(end - begin);
        trace.p_eh_w.push_back(p_eh);
        trace.v_eh_v.push_back(harvester_voltage(model, p_eh, model.load_resistance_ohm));
    }
    return trace;
}

}  // namespace wptsim
