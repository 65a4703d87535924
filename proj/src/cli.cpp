#include "padic/cli.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "padic/errors.hpp"
#include "padic/functions.hpp"
#include "padic/gibbs.hpp"
#include "padic/literal.hpp"
#include "padic/number.hpp"
#include "padic/polynomial.hpp"
#include "padic/potts_bethe.hpp"
#include "padic/rng.hpp"
#include "padic/symbolic.hpp"

namespace padic {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kExperiments = {
    "fixed-points", "classify",     "orbit",       "julia-partition",
    "incidence",    "periodic",     "conjugacy",   "gibbs-compat",
    "ti-solve",     "hm-construct", "count-bound", "small-prime",
};

bool uses_map_parameters(const std::string& e) {
    return e == "fixed-points" || e == "classify" || e == "orbit" ||
           e == "julia-partition" || e == "incidence" || e == "periodic" ||
           e == "conjugacy" || e == "small-prime";
}

bool uses_state_count(const std::string& e) {
    return e == "gibbs-compat" || e == "ti-solve" || e == "hm-construct" ||
           e == "count-bound";
}

// Parsed-and-validated companions of the raw config.
struct Resolved {
    long long precision = 0;
    std::optional<PadicNumber> theta;
    std::optional<PadicNumber> q;
    std::optional<PadicNumber> x0;
};

PadicNumber parse_field(const std::string& field, const std::string& text,
                        long long prime, long long precision) {
    try {
        return parse_padic_literal(text, prime, precision);
    } catch (const parse_error& e) {
        throw config_error("--" + field + ": " + e.what());
    }
}

void require_field(bool present, const std::string& field,
                   const std::string& experiment) {
    if (!present) {
        throw config_error("--" + field + " is required by experiment " +
                           experiment);
    }
}

const char* error_kind(const error& e) {
    if (dynamic_cast<const out_of_regime_error*>(&e)) return "out-of-regime";
    if (dynamic_cast<const singular_input_error*>(&e)) return "singular-input";
    if (dynamic_cast<const precision_exhausted_error*>(&e))
        return "precision-exhausted";
    if (dynamic_cast<const infeasible_error*>(&e)) return "infeasible";
    if (dynamic_cast<const not_a_cycle_error*>(&e)) return "not-a-cycle";
    if (dynamic_cast<const degenerate_form_error*>(&e)) return "degenerate-form";
    if (dynamic_cast<const inadmissible_alpha_error*>(&e))
        return "inadmissible-alpha";
    if (dynamic_cast<const partition_function_zero_error*>(&e))
        return "partition-function-zero";
    if (dynamic_cast<const escapes_partition_error*>(&e))
        return "escapes-partition";
    if (dynamic_cast<const not_prime_error*>(&e)) return "not-prime";
    if (dynamic_cast<const parse_error*>(&e)) return "parse";
    if (dynamic_cast<const out_of_domain_error*>(&e)) return "out-of-domain";
    return "error";
}

// Residual size entry: the valuation when resolved, the window bound for a
// cancelled value, null for an exact zero (no finite bound applies).
ordered_json residual_entry(const PadicNumber& r) {
    if (r.is_exact_zero()) return nullptr;
    if (r.is_normal()) return r.valuation();
    return r.abs_precision();
}

ordered_json residual_entry(long long metric_value) {
    if (metric_value == ORD_INFINITY) return nullptr;
    return metric_value;
}

// Parameter regime of the rational map family: the inequality chain all
// experiments stand on, plus a tag naming the invariant-set shape the prime
// and the exponents select.
ordered_json regime_for_map(const PottsBetheMap& map) {
    ordered_json r;
    std::string tag;
    if (map.prime() % 3 == 1) {
        long long m = map.markov_index();
        tag = m == 0 ? "three-ball" : "ladder-" + std::to_string(m);
    } else if (map.prime() == 3) {
        tag = "prime-three";
    } else if (map.prime() == 2) {
        tag = "prime-two";
    } else {
        tag = "general";
    }
    r["tag"] = tag;
    std::ostringstream chain;
    chain << "0 < |theta - 1| = " << map.prime() << "^-" << map.s()
          << " < |q| = " << map.prime() << "^-" << map.t() << " < 1";
    r["chain"] = chain.str();
    return r;
}

const char* stability_name(Stability s) {
    return s == Stability::Attracting ? "attracting" : "repelling";
}

const char* outcome_name(BasinOutcome::Kind kind) {
    switch (kind) {
        case BasinOutcome::Kind::Converges: return "converges";
        case BasinOutcome::Kind::InJuliaPartition: return "in-julia-partition";
        case BasinOutcome::Kind::HitsSingular: return "hits-singular";
        case BasinOutcome::Kind::Undecided: return "undecided";
    }
    throw error("unreachable");
}

// ---------------------------------------------------------------------------
// experiments on the rational map

int run_fixed_points(const ExperimentConfig&, const Resolved& r,
                     ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    ordered_json points = ordered_json::array();
    ordered_json residuals = ordered_json::array();
    for (const auto& fp : map.fixed_points()) {
        ordered_json row;
        row["index"] = fp.index;
        row["point"] = fp.point.render();
        row["multiplier"] = fp.multiplier.render();
        row["multiplier_norm_exp"] = fp.multiplier_norm_exp;
        row["stability"] = stability_name(fp.stability);
        points.push_back(std::move(row));
        residuals.push_back(residual_entry(map.eval(fp.point) - fp.point));
    }
    doc["results"]["count"] = points.size();
    doc["results"]["fixed_points"] = std::move(points);
    doc["residual_valuations"] = std::move(residuals);
    return 0;
}

int run_classify(const ExperimentConfig& config, const Resolved& r,
                 ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    if (r.x0) {
        RegionTag tag = map.classify(*r.x0);
        doc["results"]["point"] = r.x0->render();
        doc["results"]["region"] = region_name(tag);
        const auto& julia = map.julia_family();
        doc["results"]["in_julia_family"] =
            std::find(julia.begin(), julia.end(), tag) != julia.end();
    } else {
        // No point given: demonstrate the region system by sampling each
        // region and classifying the sample back.
        SplitMix64 rng(config.seed);
        ordered_json rows = ordered_json::array();
        for (RegionTag tag : map.region_tags()) {
            ordered_json row;
            row["region"] = region_name(tag);
            try {
                PadicNumber x = sample_region(map, tag, rng);
                row["sample"] = x.render();
                RegionTag back = map.classify(x);
                row["classified"] = region_name(back);
                row["match"] = back == tag;
            } catch (const infeasible_error&) {
                row["sample"] = nullptr;
                row["note"] = "empty at these parameters";
            }
            rows.push_back(std::move(row));
        }
        doc["results"]["regions"] = std::move(rows);
    }
    doc["residual_valuations"] = ordered_json::array();
    return 0;
}

int run_orbit(const ExperimentConfig& config, const Resolved& r,
              ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);

    SplitMix64 rng(config.seed);
    PadicNumber start = [&] {
        if (r.x0) return *r.x0;
        // Default to the most interesting neighbourhood available: near a
        // repelling point when one exists, otherwise the unit sphere about 1.
        if (!map.julia_family().empty())
            return sample_region(map, map.julia_family().front(), rng);
        return sample_region(map, RegionTag::A1, rng);
    }();

    BasinOutcome outcome =
        basin_decide(map, start, static_cast<int>(config.max_iter));
    doc["results"]["start"] = start.render();
    doc["results"]["outcome"] = outcome_name(outcome.kind);
    doc["results"]["steps"] = outcome.steps;
    doc["results"]["last_region"] =
        outcome.region ? ordered_json(region_name(*outcome.region))
                       : ordered_json(nullptr);

    // Short prefix of the region track, for eyeballing the flow.
    ordered_json trace = ordered_json::array();
    PadicNumber x = start;
    long long horizon = std::min<long long>(config.max_iter, 12);
    for (long long i = 0; i <= horizon; ++i) {
        ordered_json row;
        row["step"] = i;
        try {
            row["region"] = region_name(map.classify(x));
        } catch (const error&) {
            row["region"] = nullptr;
        }
        trace.push_back(std::move(row));
        if (i == horizon) break;
        try {
            x = map.eval(x);
        } catch (const error&) {
            break;
        }
    }
    doc["results"]["region_trace"] = std::move(trace);
    doc["residual_valuations"] = ordered_json::array();
    return outcome.kind == BasinOutcome::Kind::Undecided ? 2 : 0;
}

int run_julia_partition(const ExperimentConfig&, const Resolved& r,
                        ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    MarkovPartition part = build_markov_partition(map);

    ordered_json balls = ordered_json::array();
    for (std::size_t i = 0; i < part.size(); ++i) {
        ordered_json row;
        row["index"] = i;
        row["center"] = part.balls[i].center.render();
        row["radius_exp"] = part.balls[i].radius_exp;
        row["scaling_exp"] = part.tau[i];
        balls.push_back(std::move(row));
    }
    ordered_json kappa = ordered_json::array();
    for (std::size_t i = 0; i < part.size(); ++i) {
        ordered_json krow = ordered_json::array();
        for (std::size_t j = 0; j < part.size(); ++j)
            krow.push_back(residual_entry(part.kappa[i][j]));
        kappa.push_back(std::move(krow));
    }
    doc["results"]["size"] = part.size();
    doc["results"]["balls"] = std::move(balls);
    doc["results"]["center_separations"] = std::move(kappa);
    doc["residual_valuations"] = ordered_json::array();
    return 0;
}

int run_incidence(const ExperimentConfig&, const Resolved& r,
                  ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    MarkovPartition part = build_markov_partition(map);
    IncidenceMatrix a = incidence_from_dynamics(part, map);

    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < a.size(); ++j) row.push_back(a.entry(i, j));
        rows.push_back(std::move(row));
    }
    long long m = map.markov_index();
    bool matches = true;
    if (m == 0) {
        matches = a.size() == 3;
        for (std::size_t i = 0; i < a.size() && matches; ++i)
            for (std::size_t j = 0; j < a.size() && matches; ++j)
                matches = a.entry(i, j) == 1;
    } else {
        IncidenceMatrix expect = a_m_template(m, map.t(), map.s());
        matches = a.size() == expect.size();
        for (std::size_t i = 0; i < a.size() && matches; ++i)
            for (std::size_t j = 0; j < a.size() && matches; ++j)
                matches = a.entry(i, j) == expect.entry(i, j);
    }

    ordered_json counts = ordered_json::array();
    for (long long n = 1; n <= 4; ++n) {
        ordered_json row;
        row["n"] = n;
        row["periodic_points"] =
            count_periodic_points(a, n).convert_to<long long>();
        counts.push_back(std::move(row));
    }

    doc["results"]["size"] = a.size();
    doc["results"]["matrix"] = std::move(rows);
    doc["results"]["irreducible"] = a.is_irreducible();
    doc["results"]["ladder_index"] = m;
    doc["results"]["matches_template"] = matches;
    doc["results"]["cycle_counts"] = std::move(counts);
    doc["residual_valuations"] = ordered_json::array();
    return 0;
}

int run_periodic(const ExperimentConfig& config, const Resolved& r,
                 ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    MarkovPartition part = build_markov_partition(map);
    IncidenceMatrix a = incidence_from_dynamics(part, map);

    long long nmax = std::clamp<long long>(config.max_iter, 1, 4);
    const int alphabet = static_cast<int>(a.size());

    ordered_json levels = ordered_json::array();
    ordered_json residuals = ordered_json::array();
    for (long long n = 1; n <= nmax; ++n) {
        // Enumerate all cyclically admissible words of length n.
        std::vector<int> word(static_cast<std::size_t>(n), 0);
        long long constructed = 0;
        std::optional<long long> min_res;
        bool more = true;
        while (more) {
            bool admissible = true;
            for (long long i = 0; admissible && i + 1 < n; ++i)
                admissible = a.allows(word[static_cast<std::size_t>(i)],
                                      word[static_cast<std::size_t>(i + 1)]);
            admissible = admissible && a.allows(word.back(), word.front());
            if (admissible) {
                PadicNumber x = periodic_point_from_word(map, part, word);
                PadicNumber y = x;
                for (long long i = 0; i < n; ++i) y = map.eval(y);
                PadicNumber gap = y - x;
                residuals.push_back(residual_entry(gap));
                if (!gap.is_exact_zero()) {
                    long long rv = gap.is_normal() ? gap.valuation()
                                                   : gap.abs_precision();
                    min_res = min_res ? std::min(*min_res, rv) : rv;
                }
                ++constructed;
            }
            // Odometer over the alphabet, least significant position last.
            long long pos = n - 1;
            while (pos >= 0) {
                int& digit = word[static_cast<std::size_t>(pos)];
                if (++digit < alphabet) break;
                digit = 0;
                --pos;
            }
            more = pos >= 0;
        }
        ordered_json row;
        row["n"] = n;
        row["expected"] = count_periodic_points(a, n).convert_to<long long>();
        row["constructed"] = constructed;
        row["min_residual_valuation"] =
            min_res ? ordered_json(*min_res) : ordered_json(nullptr);
        levels.push_back(std::move(row));
    }
    doc["results"]["levels"] = std::move(levels);
    doc["residual_valuations"] = std::move(residuals);
    return 0;
}

std::vector<int> random_cyclic_word(const IncidenceMatrix& a, SplitMix64& rng,
                                    long long length) {
    const int alphabet = static_cast<int>(a.size());
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::vector<int> word;
        word.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(alphabet))));
        bool ok = true;
        for (long long i = 1; i < length; ++i) {
            std::vector<int> next;
            for (int j = 0; j < alphabet; ++j)
                if (a.allows(word.back(), j)) next.push_back(j);
            if (next.empty()) {
                ok = false;
                break;
            }
            word.push_back(next[rng.below(next.size())]);
        }
        if (ok && a.allows(word.back(), word.front())) return word;
    }
    throw infeasible_error("no admissible cyclic word found");
}

int run_conjugacy(const ExperimentConfig& config, const Resolved& r,
                  ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);
    MarkovPartition part = build_markov_partition(map);
    IncidenceMatrix a = incidence_from_dynamics(part, map);

    SplitMix64 rng(config.seed);
    long long compared = 0;
    long long distance_matches = 0;
    long long code_matches = 0;
    long long skipped_equal = 0;
    for (long long i = 0; i < config.samples; ++i) {
        std::vector<int> u = random_cyclic_word(a, rng, rng.range(1, 4));
        std::vector<int> v = random_cyclic_word(a, rng, rng.range(1, 4));
        if (u == v) {
            ++skipped_equal;
            continue;
        }
        PadicNumber xu = periodic_point_from_word(map, part, u);
        PadicNumber xv = periodic_point_from_word(map, part, v);
        Itinerary iu{u, u.size()};
        Itinerary iv{v, v.size()};
        long long expected = df_distance(part, iu, iv);
        PadicNumber gap = xu - xv;
        ++compared;
        if (gap.is_normal() && gap.valuation() == expected) ++distance_matches;
        Itinerary coded = encode_itinerary(map, part, xu, u.size());
        if (coded.symbols == u) ++code_matches;
    }
    doc["results"]["pairs"] = config.samples;
    doc["results"]["compared"] = compared;
    doc["results"]["skipped_equal_words"] = skipped_equal;
    doc["results"]["distance_matches"] = distance_matches;
    doc["results"]["itinerary_matches"] = code_matches;
    doc["results"]["isometric"] =
        distance_matches == compared && code_matches == compared;
    doc["residual_valuations"] = ordered_json::array();
    return 0;
}

// ---------------------------------------------------------------------------
// experiments on tree measures

int run_gibbs_compat(const ExperimentConfig& config, const Resolved& r,
                     ordered_json& doc) {
    PadicNumber q_value = PadicNumber::from_integer(config.q_states,
                                                    config.prime, r.precision);
    PottsBetheMap map(*r.theta, q_value);
    doc["regime"] = regime_for_map(map);

    std::vector<PadicNumber> level(static_cast<std::size_t>(config.q_states - 1),
                                   PadicNumber::zero(config.prime));
    BoundaryFunction field{1, {level}};
    PadicNumber coupling = ln_p(*r.theta);

    CayleyTree tree(3, 2);
    CompatibilityReport report = check_compatibility(tree, field, coupling, 1);

    doc["results"]["field"] = "constant-one";
    doc["results"]["coupling"] = coupling.render();
    doc["results"]["level"] = report.level;
    doc["results"]["compatible"] = report.compatible;
    doc["results"]["min_residual_valuation"] =
        residual_entry(report.min_residual_valuation);
    ordered_json residuals = ordered_json::array();
    for (long long rv : report.residual_valuations)
        residuals.push_back(residual_entry(rv));
    doc["residual_valuations"] = std::move(residuals);
    return 0;
}

const char* form_name(TiForm form) {
    switch (form) {
        case TiForm::A: return "A";
        case TiForm::B: return "B";
        case TiForm::C: return "C";
        case TiForm::D: return "D";
        case TiForm::E: return "E";
    }
    throw error("unreachable");
}

int run_ti_solve(const ExperimentConfig& config, const Resolved& r,
                 ordered_json& doc) {
    PadicNumber q_value = PadicNumber::from_integer(config.q_states,
                                                    config.prime, r.precision);
    PottsBetheMap map(*r.theta, q_value);
    doc["regime"] = regime_for_map(map);

    std::vector<TiForm> forms;
    if (config.form.empty()) {
        forms = {TiForm::A, TiForm::B, TiForm::C, TiForm::D, TiForm::E};
    } else {
        forms = {config.form == "A"   ? TiForm::A
                 : config.form == "B" ? TiForm::B
                 : config.form == "C" ? TiForm::C
                 : config.form == "D" ? TiForm::D
                                      : TiForm::E};
    }

    // Shape splits per form: (m1, m2, m3) class sizes where used.
    struct Shape {
        TiForm form;
        long long m1 = 0, m2 = 0, m3 = 0;
    };
    std::vector<Shape> shapes;
    const long long width = config.q_states - 1;
    for (TiForm form : forms) {
        switch (form) {
            case TiForm::A:
            case TiForm::B:
                shapes.push_back({form, 0, 0, 0});
                break;
            case TiForm::C:
            case TiForm::D:
                for (long long m1 = 1; m1 < width; ++m1)
                    shapes.push_back({form, m1, width - m1, 0});
                break;
            case TiForm::E:
                for (long long m1 = 1; m1 + 2 <= width; ++m1)
                    for (long long m2 = 1; m1 + m2 + 1 <= width; ++m2)
                        shapes.push_back({form, m1, m2, width - m1 - m2});
                break;
        }
    }

    ordered_json rows = ordered_json::array();
    ordered_json residuals = ordered_json::array();
    long long total = 0;
    for (const Shape& shape : shapes) {
        auto solutions = ti_solve(shape.form, config.q_states, *r.theta,
                                  shape.m1, shape.m2, shape.m3);
        ordered_json row;
        row["form"] = form_name(shape.form);
        if (shape.m1 > 0) {
            ordered_json sizes = ordered_json::array();
            sizes.push_back(shape.m1);
            sizes.push_back(shape.m2);
            if (shape.m3 > 0) sizes.push_back(shape.m3);
            row["class_sizes"] = std::move(sizes);
        }
        row["count"] = solutions.size();
        ordered_json rendered = ordered_json::array();
        for (const auto& z : solutions) {
            ordered_json vec = ordered_json::array();
            for (const auto& value : z) vec.push_back(value.render());
            rendered.push_back(std::move(vec));
            for (const auto& residual : z_system_residuals(z, *r.theta))
                residuals.push_back(residual_entry(residual));
        }
        row["solutions"] = std::move(rendered);
        total += static_cast<long long>(solutions.size());
        rows.push_back(std::move(row));
    }
    doc["results"]["total_solutions"] = total;
    doc["results"]["shapes"] = std::move(rows);
    doc["residual_valuations"] = std::move(residuals);
    return 0;
}

int run_hm_construct(const ExperimentConfig& config, const Resolved& r,
                     ordered_json& doc) {
    PadicNumber q_value = PadicNumber::from_integer(config.q_states,
                                                    config.prime, r.precision);
    PottsBetheMap map(*r.theta, q_value);
    doc["regime"] = regime_for_map(map);
    MarkovPartition part = build_markov_partition(map);

    // A genuine two-cycle from the symbolic layer: the two rotations of the
    // word (1 2) code the two points swapped by the map.
    PadicNumber xa = periodic_point_from_word(map, part, {1, 2});
    PadicNumber xb = periodic_point_from_word(map, part, {2, 1});
    BoundaryFunction field =
        cycle_to_measure({xa, xb}, 1, config.q_states, *r.theta);

    PadicNumber coupling = ln_p(*r.theta);
    CayleyTree tree(3, 2);
    CompatibilityReport report = check_compatibility(tree, field, coupling, 1);

    doc["results"]["period"] = field.period;
    ordered_json cycle = ordered_json::array();
    cycle.push_back(xa.render());
    cycle.push_back(xb.render());
    doc["results"]["cycle"] = std::move(cycle);
    ordered_json levels = ordered_json::array();
    for (const auto& level : field.levels) {
        ordered_json row = ordered_json::array();
        for (const auto& h : level) row.push_back(h.render());
        levels.push_back(std::move(row));
    }
    doc["results"]["field_levels"] = std::move(levels);
    doc["results"]["compatible"] = report.compatible;
    doc["results"]["min_residual_valuation"] =
        residual_entry(report.min_residual_valuation);
    ordered_json residuals = ordered_json::array();
    for (long long rv : report.residual_valuations)
        residuals.push_back(residual_entry(rv));
    doc["residual_valuations"] = std::move(residuals);
    return 0;
}

int run_count_bound(const ExperimentConfig& config, const Resolved&,
                    ordered_json& doc) {
    bigint bound =
        hgm_lower_bound(config.period_count, config.q_states, config.prime);

    bigint qstar(config.q_states);
    long long l = 0;
    while (qstar % config.prime == 0) {
        qstar /= config.prime;
        ++l;
    }
    ordered_json regime;
    regime["tag"] = "combinatorial";
    std::ostringstream chain;
    chain << "p = " << config.prime << " prime; q = " << config.q_states
          << " = " << config.prime << "^" << l << " * " << qstar
          << "; m = " << config.period_count << " >= 1";
    regime["chain"] = chain.str();
    doc["regime"] = std::move(regime);

    ordered_json excluded = ordered_json::array();
    bigint step = pow_bigint(config.prime, l);
    for (bigint i = 1; i < qstar; ++i)
        excluded.push_back((i * step).convert_to<long long>());

    doc["results"]["m"] = config.period_count;
    doc["results"]["q_states"] = config.q_states;
    doc["results"]["excluded_class_sizes"] = std::move(excluded);
    if (bound <= bigint(INT64_MAX)) {
        doc["results"]["bound"] = bound.convert_to<long long>();
    } else {
        doc["results"]["bound"] = bound.str();
    }
    doc["residual_valuations"] = ordered_json::array();
    return 0;
}

int run_small_prime(const ExperimentConfig& config, const Resolved& r,
                    ordered_json& doc) {
    PottsBetheMap map(*r.theta, *r.q);
    doc["regime"] = regime_for_map(map);

    const CubicRoots& cert = map.cubic_certificate();
    doc["results"]["nontrivial_fixed_points"] = map.fixed_points().size() - 1;
    doc["results"]["congruence_solvable"] = cert.congruence_solvable;
    ordered_json vertices = ordered_json::array();
    for (const auto& v : cert.polygon.vertices) {
        ordered_json pair = ordered_json::array();
        pair.push_back(v.first);
        pair.push_back(v.second);
        vertices.push_back(std::move(pair));
    }
    doc["results"]["polygon_vertices"] = std::move(vertices);
    ordered_json julia = ordered_json::array();
    for (RegionTag tag : map.julia_family()) julia.push_back(region_name(tag));
    doc["results"]["julia_family"] = std::move(julia);

    SplitMix64 rng(config.seed);
    long long converged = 0, in_julia = 0, singular = 0, undecided = 0;
    for (long long i = 0; i < config.samples; ++i) {
        long long v = rng.range(0, map.s());
        PadicNumber offset =
            random_padic(rng, config.prime, v, r.precision - v);
        PadicNumber x = PadicNumber::one(config.prime, r.precision) + offset;
        BasinOutcome outcome =
            basin_decide(map, x, static_cast<int>(config.max_iter));
        switch (outcome.kind) {
            case BasinOutcome::Kind::Converges: ++converged; break;
            case BasinOutcome::Kind::InJuliaPartition: ++in_julia; break;
            case BasinOutcome::Kind::HitsSingular: ++singular; break;
            case BasinOutcome::Kind::Undecided: ++undecided; break;
        }
    }
    doc["results"]["samples"] = config.samples;
    doc["results"]["converged"] = converged;
    doc["results"]["in_julia_partition"] = in_julia;
    doc["results"]["hit_singular"] = singular;
    doc["results"]["undecided"] = undecided;
    doc["residual_valuations"] = ordered_json::array();
    return undecided > 0 ? 2 : 0;
}

int dispatch(const ExperimentConfig& config, const Resolved& r,
             ordered_json& doc) {
    const std::string& e = config.experiment;
    if (e == "fixed-points") return run_fixed_points(config, r, doc);
    if (e == "classify") return run_classify(config, r, doc);
    if (e == "orbit") return run_orbit(config, r, doc);
    if (e == "julia-partition") return run_julia_partition(config, r, doc);
    if (e == "incidence") return run_incidence(config, r, doc);
    if (e == "periodic") return run_periodic(config, r, doc);
    if (e == "conjugacy") return run_conjugacy(config, r, doc);
    if (e == "gibbs-compat") return run_gibbs_compat(config, r, doc);
    if (e == "ti-solve") return run_ti_solve(config, r, doc);
    if (e == "hm-construct") return run_hm_construct(config, r, doc);
    if (e == "count-bound") return run_count_bound(config, r, doc);
    if (e == "small-prime") return run_small_prime(config, r, doc);
    throw error("unreachable");
}

}  // namespace

const std::vector<std::string>& experiment_names() { return kExperiments; }

Report run_experiment(const ExperimentConfig& config) {
    // --- validation: every problem here names the offending field ---------
    if (std::find(kExperiments.begin(), kExperiments.end(),
                  config.experiment) == kExperiments.end()) {
        std::string names;
        for (const auto& name : kExperiments)
            names += (names.empty() ? "" : ", ") + name;
        throw config_error("experiment: unknown name \"" + config.experiment +
                           "\"; valid names: " + names);
    }
    if (config.prime < 2 || !is_prime(config.prime))
        throw config_error("--prime: not a prime: " +
                           std::to_string(config.prime));

    Resolved r;
    r.precision = config.precision != 0 ? config.precision : default_precision();
    if (r.precision < 2 || r.precision > 4096)
        throw config_error("--precision: must lie in [2, 4096], got " +
                           std::to_string(r.precision));
    if (config.max_iter < 1)
        throw config_error("--max-iter: must be positive");
    if (config.samples < 1)
        throw config_error("--samples: must be positive");
    if (config.period_count < 1)
        throw config_error("--m: must be positive");

    const bool map_experiment = uses_map_parameters(config.experiment);
    const bool measure_experiment = uses_state_count(config.experiment);
    if (map_experiment || measure_experiment) {
        if (config.experiment != "count-bound") {
            require_field(!config.theta.empty(), "theta", config.experiment);
            r.theta = parse_field("theta", config.theta, config.prime,
                                  r.precision);
        }
    }
    if (map_experiment) {
        require_field(!config.q.empty(), "q", config.experiment);
        r.q = parse_field("q", config.q, config.prime, r.precision);
    }
    if (measure_experiment && config.q_states < 2)
        throw config_error("--q-states is required by experiment " +
                           config.experiment + " and must be at least 2");
    if (!config.start.empty())
        r.x0 = parse_field("x0", config.start, config.prime, r.precision);
    if (config.experiment == "small-prime" && config.prime != 2 &&
        config.prime != 3)
        throw config_error(
            "--prime: small-prime covers p = 2 and p = 3; use the other "
            "experiments for larger primes");
    if (config.experiment == "ti-solve" && !config.form.empty() &&
        (config.form.size() != 1 || config.form[0] < 'A' ||
         config.form[0] > 'E'))
        throw config_error("--form: expected one of A, B, C, D, E, got \"" +
                           config.form + "\"");

    // --- report skeleton ---------------------------------------------------
    ordered_json doc;
    doc["schema"] = "pbdyn/1";
    doc["experiment"] = config.experiment;
    ordered_json inputs;
    inputs["prime"] = config.prime;
    if (!config.theta.empty()) inputs["theta"] = config.theta;
    if (!config.q.empty()) inputs["q"] = config.q;
    if (config.q_states > 0) inputs["q_states"] = config.q_states;
    inputs["precision"] = r.precision;
    inputs["seed"] = config.seed;
    inputs["max_iter"] = config.max_iter;
    if (!config.start.empty()) inputs["x0"] = config.start;
    if (!config.form.empty()) inputs["form"] = config.form;
    if (config.experiment == "count-bound") inputs["m"] = config.period_count;
    if (config.experiment == "conjugacy" || config.experiment == "small-prime")
        inputs["samples"] = config.samples;
    doc["inputs"] = std::move(inputs);

    // --- execution: experiment failures land in the report ------------------
    int exit_code = 0;
    const auto started = std::chrono::steady_clock::now();
    try {
        exit_code = dispatch(config, r, doc);
        doc["status"] = exit_code == 2 ? "undecided" : "ok";
    } catch (const error& e) {
        doc["status"] = "error";
        ordered_json detail;
        detail["type"] = error_kind(e);
        detail["message"] = e.what();
        doc["error"] = std::move(detail);
        exit_code = 1;
    }
    if (config.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        doc["timing_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed)
                .count();
    }
    return {doc.dump(2) + "\n", exit_code};
}

}  // namespace padic
