#include "ggbraid/estimate.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ggbraid/p3_rewrite.hpp"
#include "ggbraid/trajectory.hpp"

namespace ggbraid {

namespace {

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, std::max(1u, hw)));
}

long long factorial(int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

// pseudo-region assignment for bad points off the disc: nearest U region in
// the layout's natural coordinates
int nearest_region(const SurfacePoint& p, const RegionSpec& r) {
    const int inside = which_region(p, r);
    if (inside >= 0) return inside;
    auto interval_dist = [](double x, double lo, double hi) {
        if (x < lo) return lo - x;
        if (x > hi) return x - hi;
        return 0.0;
    };
    double best = 1e18;
    int arg = 0;
    switch (r.surface) {
        case Surface::Sphere: {
            const SphereLayout& l = r.sphere();
            const double z = p.z;
            const double d[4] = {interval_dist(z, l.c1, 1.0), interval_dist(z, l.c3, l.c2),
                                 interval_dist(z, l.c5, l.c4), interval_dist(z, -1.0, l.c6)};
            for (int i = 0; i < 4; ++i)
                if (d[i] < best) best = d[i], arg = i;
            return arg;
        }
        case Surface::Torus: {
            const TorusLayout& l = r.torus();
            auto wrap_dist = [&](double x, double lo, double hi) {
                double d0 = interval_dist(x, lo, hi);
                double d1 = interval_dist(x + 1.0, lo, hi);
                double d2 = interval_dist(x - 1.0, lo, hi);
                return std::min(d0, std::min(d1, d2));
            };
            const double d1 = wrap_dist(p.x, l.u1lo, l.u1hi) + wrap_dist(p.y, l.clr, 1.0 - l.clr);
            const double d2 = wrap_dist(p.x, l.u2lo, l.u2hi) + wrap_dist(p.y, l.clr, 1.0 - l.clr);
            return d1 <= d2 ? 0 : 1;
        }
        default:
            break;
    }
    return arg;
}

// probability that an ordered uniform configuration realizes the type:
// multinomial count of assignments times the product of region areas
double type_probability(const RegionSpec& r, const TypeSignature& t) {
    double assignments = 1.0;
    int placed = 0;
    for (int c : t.counts) {
        for (int j = 1; j <= c; ++j) assignments *= static_cast<double>(++placed) / j;
    }
    double prob = assignments;
    for (int reg = 0; reg < r.m; ++reg) prob *= std::pow(r.areas[reg], t.counts[reg]);
    return prob;
}

// coordinate margin of every point to its region boundary; audits skip
// configurations the retry jitter could push across a boundary
bool audit_safe(const Configuration& x, const RegionSpec& r, double margin) {
    if (r.surface != Surface::Disc) return false;
    const DiscLayout& d = r.disc();
    for (const auto& p : x.pts) {
        const double s = p.x * p.x + p.y * p.y;
        const double th = std::fabs(std::atan2(p.y, p.x));
        const int reg = which_region(p, r);
        if (reg < 0) return false;
        if (reg == 0 && d.s1 - s < margin) return false;
        if (reg == 1 && (s - d.s2 < margin || d.s3 - s < margin || th - d.eta < margin))
            return false;
        if (reg == 2 && (s - d.s4 < margin || d.s5 - s < margin || th - d.eta < margin))
            return false;
    }
    return true;
}

struct BlockStats {
    std::map<TypeSignature, TypeStats> types;
    long long bad_count = 0;
    double bad_sum = 0.0, bad_sumsq = 0.0, bad_abs_max = 0.0;
    double inc_sum = 0.0, inc_sumsq = 0.0;  // values included in the mean
    long long audited = 0, audit_failures = 0;
    std::string first_audit_failure;
};

// deterministic block-parallel driver: sample i always lands in block
// i / block_size and blocks are reduced in index order, so results do not
// depend on the worker count or scheduling
std::vector<BlockStats> run_blocks(long long n, int workers,
                                   const std::function<void(long long, BlockStats&)>& fn) {
    const long long block_size = 1024;
    const long long n_blocks = (n + block_size - 1) / block_size;
    std::vector<BlockStats> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<long long> next_block{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto worker_fn = [&](int wi) {
        try {
            for (;;) {
                const long long b = next_block.fetch_add(1);
                if (b >= n_blocks) return;
                BlockStats& bs = blocks[static_cast<std::size_t>(b)];
                const long long lo = b * block_size;
                const long long hi = std::min(n, lo + block_size);
                for (long long i = lo; i < hi; ++i) fn(i, bs);
            }
        } catch (...) {
            errors[wi] = std::current_exception();
        }
    };
    if (workers == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
        for (auto& th : pool) th.join();
    }
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
    return blocks;
}

}  // namespace

double EstimateReport::type_volume_fraction(const TypeSignature& t) const {
    if (stratified) {
        auto it = exact_fractions.find(t);
        return it == exact_fractions.end() ? 0.0 : it->second;
    }
    auto it = per_type.find(t);
    return it == per_type.end() ? 0.0
                                : static_cast<double>(it->second.count) / n_samples;
}

double EstimateReport::type_partial_mean(const TypeSignature& t) const {
    auto it = per_type.find(t);
    return it == per_type.end() ? 0.0 : it->second.sum / n_samples;
}

double EstimateReport::type_partial_stderr(const TypeSignature& t) const {
    auto it = per_type.find(t);
    if (it == per_type.end()) return 0.0;
    const double e1 = it->second.sum / n_samples;
    const double e2 = it->second.sumsq / n_samples;
    return std::sqrt(std::max(0.0, e2 - e1 * e1) / n_samples);
}

EstimateReport mc_gamma_hat(const CochainHandle& c, const std::vector<BraidWord>& elements,
                            const RegionSpec& r, const McOptions& opt) {
    const GroupId quotient = quotient_group(r.surface);
    if (c.group != quotient) throw GroupMismatch("cochain group does not match the surface");
    if (static_cast<int>(elements.size()) != c.degree + 1)
        throw InvalidConfig("element tuple arity must be degree + 1");
    for (const auto& e : elements)
        if (e.group != quotient) throw GroupMismatch("element word outside the quotient group");
    if (opt.n_samples < 100) throw InsufficientSamples("need at least 100 samples");

    // per-type symbolic predictions and their cochain value, shared by every
    // sample of that type (the test cochains are conjugation invariant)
    struct TypeCell {
        std::vector<BraidWord> words;
        double value;
    };
    std::map<TypeSignature, TypeCell> cells;
    for (const TypeSignature& t : all_good_types(r.surface)) {
        TypeCell cell;
        for (const auto& e : elements) cell.words.push_back(predicted_gamma(e, t, r.surface).word);
        cell.value = c.eval(cell.words);
        cells[t] = cell;
    }

    // flows reused across samples (stateless closures)
    std::vector<Isotopy> flows;
    if (r.surface == Surface::Disc)
        for (const auto& e : elements) flows.push_back(rho_word_flow(r, e));

    const long long block_size = 1024;
    const long long n_blocks = (opt.n_samples + block_size - 1) / block_size;
    std::vector<BlockStats> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<long long> next_block{0};
    std::vector<std::exception_ptr> worker_errors(resolve_workers(opt.workers));

    auto run_sample = [&](long long i, BlockStats& bs) {
        Rng rng(opt.seed, static_cast<std::uint64_t>(i));
        const Configuration x = sample_configuration(r.surface, r.m, rng, opt.delta_sep);
        const TypeSignature t = classify_type(x, r);
        if (t.good) {
            const TypeCell& cell = cells.at(t);
            TypeStats& ts = bs.types[t];
            ts.count += 1;
            ts.sum += cell.value;
            ts.sumsq += cell.value * cell.value;
            bs.inc_sum += cell.value;
            bs.inc_sumsq += cell.value * cell.value;
            if (r.surface == Surface::Disc && opt.audit_fraction > 0.0) {
                const double u = static_cast<double>(
                                     hash_combine(opt.seed ^ 0xAAD17ULL,
                                                  static_cast<std::uint64_t>(i)) >>
                                     11) *
                                 0x1.0p-53;
                if (u < opt.audit_fraction && audit_safe(x, r, 1e-5)) {
                    bs.audited += 1;
                    for (std::size_t k = 0; k < elements.size(); ++k) {
                        if (elements[k].empty()) continue;
                        GammaOptions go;
                        go.seed = hash_combine(opt.seed, static_cast<std::uint64_t>(i * 8 + k));
                        const BraidWord got = gamma(flows[k], x, r.zbase, go);
                        const BraidWord want = embed_P3(cell.words[k]);
                        if (!conjugate_in_group(got, want, GroupId::b3())) {
                            bs.audit_failures += 1;
                            if (bs.first_audit_failure.empty())
                                bs.first_audit_failure =
                                    "sample " + std::to_string(i) + " type " + t.str() +
                                    " element '" + elements[k].str() + "': extracted '" +
                                    got.str() + "' not conjugate to '" + want.str() + "'";
                        }
                    }
                }
            }
        } else {
            bs.bad_count += 1;
            double val = 0.0;
            if (r.surface == Surface::Disc) {
                std::vector<BraidWord> tuple;
                tuple.reserve(elements.size());
                for (std::size_t k = 0; k < elements.size(); ++k) {
                    if (elements[k].empty()) {
                        tuple.emplace_back(GroupId::p3());
                        continue;
                    }
                    GammaOptions go;
                    go.seed = hash_combine(opt.seed, static_cast<std::uint64_t>(i * 8 + k));
                    tuple.push_back(rewrite_pure_b3_to_p3(gamma(flows[k], x, r.zbase, go)));
                }
                val = c.eval(tuple);
                bs.inc_sum += val;
                bs.inc_sumsq += val * val;
            } else {
                // nearest-type prediction feeds the error budget only
                TypeSignature nt;
                nt.counts.assign(r.m, 0);
                nt.good = true;
                for (const auto& p : x.pts) ++nt.counts[nearest_region(p, r)];
                val = cells.at(nt).value;
            }
            bs.bad_sum += val;
            bs.bad_sumsq += val * val;
            bs.bad_abs_max = std::max(bs.bad_abs_max, std::fabs(val));
        }
    };

    const int workers = resolve_workers(opt.workers);
    auto worker_fn = [&](int wi) {
        try {
            for (;;) {
                const long long b = next_block.fetch_add(1);
                if (b >= n_blocks) return;
                BlockStats& bs = blocks[static_cast<std::size_t>(b)];
                const long long lo = b * block_size;
                const long long hi = std::min(opt.n_samples, lo + block_size);
                for (long long i = lo; i < hi; ++i) run_sample(i, bs);
            }
        } catch (...) {
            worker_errors[wi] = std::current_exception();
        }
    };
    if (workers == 1) {
        worker_fn(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
        for (auto& th : pool) th.join();
    }
    for (auto& err : worker_errors)
        if (err) std::rethrow_exception(err);

    EstimateReport rep;
    rep.surface = r.surface;
    rep.epsilon = r.epsilon;
    rep.n_samples = opt.n_samples;
    rep.seed = opt.seed;
    rep.workers = workers;
    for (const auto& e : elements) rep.elements.push_back(e.str());
    rep.cochain_note = c.note;
    rep.bad_in_mean = r.surface == Surface::Disc;
    rep.region_json = r.to_json();
    rep.bad_fraction_theory = bad_volume_theory(r.surface, r.epsilon);

    double inc_sum = 0.0, inc_sumsq = 0.0;
    long long audit_failures = 0;
    std::string first_failure;
    for (const BlockStats& bs : blocks) {
        for (const auto& [t, ts] : bs.types) {
            TypeStats& agg = rep.per_type[t];
            agg.count += ts.count;
            agg.sum += ts.sum;
            agg.sumsq += ts.sumsq;
        }
        rep.bad_count += bs.bad_count;
        rep.bad_sum += bs.bad_sum;
        rep.bad_sumsq += bs.bad_sumsq;
        rep.bad_abs_max = std::max(rep.bad_abs_max, bs.bad_abs_max);
        rep.audited += bs.audited;
        audit_failures += bs.audit_failures;
        if (first_failure.empty()) first_failure = bs.first_audit_failure;
        inc_sum += bs.inc_sum;
        inc_sumsq += bs.inc_sumsq;
    }
    if (audit_failures > 0)
        throw Error("audit mismatch between symbolic and extracted braids: " + first_failure);

    rep.mean = inc_sum / opt.n_samples;
    const double e2 = inc_sumsq / opt.n_samples;
    rep.standard_error = std::sqrt(std::max(0.0, e2 - rep.mean * rep.mean) / opt.n_samples);
    rep.bad_fraction = static_cast<double>(rep.bad_count) / opt.n_samples;
    return rep;
}

std::string EstimateReport::to_json() const {
    nlohmann::ordered_json j;
    j["surface"] = surface_name(surface);
    j["epsilon"] = epsilon;
    j["n_samples"] = n_samples;
    j["seed"] = seed;
    j["workers"] = workers;
    j["elements"] = elements;
    j["cochain"] = cochain_note;
    j["mean"] = mean;
    j["standard_error"] = standard_error;
    nlohmann::ordered_json types = nlohmann::ordered_json::object();
    for (const auto& [t, ts] : per_type) {
        types[t.str()] = {{"count", ts.count},
                          {"volume_fraction", type_volume_fraction(t)},
                          {"partial_mean", type_partial_mean(t)},
                          {"partial_stderr", type_partial_stderr(t)}};
    }
    j["per_type"] = types;
    j["bad"] = {{"count", bad_count},
                {"fraction", bad_fraction},
                {"fraction_theory", bad_fraction_theory},
                {"abs_max", bad_abs_max},
                {"sum", bad_sum},
                {"included_in_mean", bad_in_mean}};
    j["audited"] = audited;
    j["region"] = nlohmann::ordered_json::parse(region_json);
    return j.dump(2);
}

SweepResult epsilon_sweep(const CochainHandle& c, const std::vector<BraidWord>& elements,
                          Surface surface, const std::vector<double>& eps_list,
                          const McOptions& opt) {
    if (eps_list.empty()) throw InvalidConfig("empty epsilon list");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw InvalidConfig("epsilon list must be strictly decreasing");

    SweepResult sw;
    sw.eps_list = eps_list;
    sw.reference_value = c.eval(elements);
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const RegionSpec r = build_regions(surface, eps_list[i]);
        McOptions o = opt;
        o.seed = hash_combine(opt.seed, static_cast<std::uint64_t>(i));
        EstimateReport rep = mc_gamma_hat(c, elements, r, o);
        sw.lambda_eps.push_back(lambda_epsilon(surface, eps_list[i]));
        sw.deviation.push_back(std::fabs(rep.mean - sw.lambda_eps.back() * sw.reference_value));
        sw.bad_abs_max = std::max(sw.bad_abs_max, rep.bad_abs_max);
        sw.reports.push_back(std::move(rep));
    }
    sw.budget.resize(eps_list.size());
    sw.all_within_budget = true;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        sw.budget[i] = bad_volume_theory(surface, eps_list[i]) * sw.bad_abs_max +
                       3.0 * sw.reports[i].standard_error;
        if (sw.deviation[i] > sw.budget[i]) sw.all_within_budget = false;
    }
    sw.trend_decreasing = sw.deviation.back() < sw.deviation.front();
    return sw;
}

std::string SweepResult::to_json() const {
    nlohmann::ordered_json j;
    j["reference_value"] = reference_value;
    j["bad_abs_max"] = bad_abs_max;
    j["all_within_budget"] = all_within_budget;
    j["trend_decreasing"] = trend_decreasing;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        rows.push_back({{"epsilon", eps_list[i]},
                        {"lambda_eps", lambda_eps[i]},
                        {"mean", reports[i].mean},
                        {"stderr", reports[i].standard_error},
                        {"deviation", deviation[i]},
                        {"budget", budget[i]}});
    }
    j["sweep"] = rows;
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const auto& r : reports) reps.push_back(nlohmann::ordered_json::parse(r.to_json()));
    j["reports"] = reps;
    return j.dump(2);
}

std::string SweepResult::to_csv() const {
    std::ostringstream out;
    out << "epsilon,type,count,volume_fraction,partial_mean,partial_stderr\n";
    out.precision(17);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const EstimateReport& r = reports[i];
        for (const auto& [t, ts] : r.per_type) {
            out << eps_list[i] << ",\"" << t.str() << "\"," << ts.count << ','
                << r.type_volume_fraction(t) << ',' << r.type_partial_mean(t) << ','
                << r.type_partial_stderr(t) << '\n';
        }
        out << eps_list[i] << ",\"bad\"," << r.bad_count << ',' << r.bad_fraction << ','
            << (r.bad_in_mean ? r.bad_sum / r.n_samples : 0.0) << ",0\n";
    }
    return out.str();
}

LambdaConstant lambda_constant(Surface s) {
    LambdaConstant l;
    l.surface = s;
    const int m = surface_strands(s);
    l.formula_terms.assign(m, 1.0 / m);
    double prod = 1.0;
    for (double a : l.formula_terms) prod *= a;
    l.value = static_cast<double>(factorial(m)) * prod;
    return l;
}

double lambda_epsilon(Surface s, double eps) {
    const int m = surface_strands(s);
    const double area = (1.0 - eps) / m;
    return static_cast<double>(factorial(m)) * std::pow(area, m);
}

}  // namespace ggbraid
