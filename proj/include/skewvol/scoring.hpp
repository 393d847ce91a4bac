/*
 * Copyright 2026 The skewvol authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SKEWVOL_SCORING_HPP
#define SKEWVOL_SCORING_HPP

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "skewvol/forecast.hpp"
#include "skewvol/math/special.hpp"
#include "skewvol/math/stats.hpp"

namespace skewvol {

/// Negatively oriented log score -log f(y), with f the Rao-Blackwellized
/// mixture density (log-sum-exp over components).
inline double log_score(const PredictiveDensity& pd, double y) {
    if (pd.components.empty()) throw std::invalid_argument("log_score: no mixture components");
    double lmax = -std::numeric_limits<double>::infinity();
    std::vector<double> lp(pd.components.size());
    for (std::size_t i = 0; i < pd.components.size(); ++i) {
        lp[i] = pd.component_logpdf(pd.components[i], y);
        lmax = std::max(lmax, lp[i]);
    }
    double s = 0.0;
    for (double v : lp) s += std::exp(v - lmax);
    return -(lmax + std::log(s / pd.components.size()));
}

/// Tick loss QS_alpha(q, y) = 2 (1{y <= q} - alpha)(q - y).
inline double quantile_score(double q, double y, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("quantile_score: bad alpha");
    return 2.0 * ((y <= q ? 1.0 : 0.0) - alpha) * (q - y);
}

/// CRPS in the energy form E|X - y| - E|X - X'| / 2, computed exactly from
/// the draws via the order statistics.
inline double crps(const PredictiveDensity& pd, double y) {
    std::vector<double> x(pd.draws.data(), pd.draws.data() + pd.draws.size());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double e_abs = 0.0, gini = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        e_abs += std::fabs(x[i] - y);
        gini += x[i] * (2.0 * (static_cast<double>(i) + 1.0) - n - 1.0);
    }
    e_abs /= n;
    gini = 2.0 * gini / (n * n);
    return e_abs - 0.5 * gini;
}

namespace detail {

/// Quantile-integral form of the (weighted) CRPS on the fixed grid
/// alpha = 0.01, ..., 0.99, trapezoid rule. This grid is part of the
/// score's definition here, so results are reproducible bit for bit.
template <class WeightFn>
double quantile_integral_score(const PredictiveDensity& pd, double y, WeightFn weight) {
    std::vector<double> x(pd.draws.data(), pd.draws.data() + pd.draws.size());
    std::sort(x.begin(), x.end());
    const std::span<const double> sorted(x.data(), x.size());
    double acc = 0.0;
    const double step = 0.01;
    for (int k = 1; k <= 99; ++k) {
        const double alpha = k * step;
        const double qs = quantile_score(math::quantile_sorted(sorted, alpha), y, alpha);
        const double w = (k == 1 || k == 99) ? 0.5 : 1.0;
        acc += w * qs * weight(alpha) * step;
    }
    return acc;
}

} // namespace detail

/// Left-tail weighted CRPS with v(alpha) = (1 - alpha)^2.
inline double twcrps(const PredictiveDensity& pd, double y) {
    return detail::quantile_integral_score(
        pd, y, [](double a) { return (1.0 - a) * (1.0 - a); });
}

/// Quantile-integral CRPS on the same grid (cross-check of the energy form).
inline double crps_quantile_form(const PredictiveDensity& pd, double y) {
    return detail::quantile_integral_score(pd, y, [](double) { return 1.0; });
}

/// Probability integral transform: fraction of predictive draws at or below
/// the realization.
inline double pit(const PredictiveDensity& pd, double y) {
    int n = 0;
    for (int i = 0; i < pd.draws.size(); ++i)
        if (pd.draws[i] <= y) ++n;
    return static_cast<double>(n) / static_cast<double>(pd.draws.size());
}

struct DmResult {
    double stat = 0.0;
    double p = 0.5;
    bool degenerate = false;
};

/// Diebold-Mariano test on the loss differential d_t = loss_a - loss_b with
/// a Newey-West long-run variance (nw_lags = 0 is the plain variance, the
/// one-step-ahead default; use horizon - 1 for multi-step forecasts).
/// One-sided p is the probability of a differential this large in favor of
/// b under equal accuracy; stat flips sign exactly when the inputs swap.
inline DmResult dm_test(const std::vector<double>& loss_a, const std::vector<double>& loss_b,
                        bool one_sided = true, int nw_lags = 0) {
    if (loss_a.size() != loss_b.size()) throw std::invalid_argument("dm_test: length mismatch");
    const int T = static_cast<int>(loss_a.size());
    if (T < 10) throw std::invalid_argument("dm_test: need at least 10 forecasts");
    std::vector<double> d(T);
    for (int t = 0; t < T; ++t) d[t] = loss_a[t] - loss_b[t];
    const double mean = math::mean(d);
    double lrv = 0.0;
    for (int t = 0; t < T; ++t) lrv += (d[t] - mean) * (d[t] - mean);
    lrv /= T;
    for (int l = 1; l <= nw_lags; ++l) {
        double g = 0.0;
        for (int t = l; t < T; ++t) g += (d[t] - mean) * (d[t - l] - mean);
        g /= T;
        lrv += 2.0 * (1.0 - static_cast<double>(l) / (nw_lags + 1.0)) * g;
    }
    DmResult r;
    if (lrv <= 0.0 || lrv < 1e-300) {
        r.degenerate = true;
        if (mean == 0.0) {
            r.stat = 0.0;
            r.p = 0.5;
        } else {
            r.stat = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.stat = mean / std::sqrt(lrv / T);
    r.p = one_sided ? math::norm_cdf(-r.stat)
                    : 2.0 * math::norm_cdf(-std::fabs(r.stat));
    return r;
}

/// Per-origin scores for one model over a backtest.
struct ModelScores {
    std::string name;
    std::vector<double> logscore;
    std::vector<double> crps;
    std::vector<double> twcrps;
    std::vector<double> qs05;
    std::vector<double> qs10;
    std::vector<double> qs20;
    std::vector<double> pit;

    void add(const PredictiveDensity& pd, double realized) {
        logscore.push_back(log_score(pd, realized));
        crps.push_back(skewvol::crps(pd, realized));
        twcrps.push_back(skewvol::twcrps(pd, realized));
        qs05.push_back(quantile_score(gar_quantile(pd, 0.05), realized, 0.05));
        qs10.push_back(quantile_score(gar_quantile(pd, 0.10), realized, 0.10));
        qs20.push_back(quantile_score(gar_quantile(pd, 0.20), realized, 0.20));
        pit.push_back(skewvol::pit(pd, realized));
    }
};

/// Comparison of several models against a baseline. The log-score column
/// reports baseline-minus-model differences (positive favors the model);
/// the remaining columns report model/baseline ratios (below one favors the
/// model), each with a one-sided Diebold-Mariano p-value against the
/// baseline.
struct ScoreReport {
    std::string baseline_name;
    std::vector<double> baseline_levels; // mean logscore, crps, twcrps, qs05, qs10, qs20
    struct Row {
        std::string name;
        std::vector<double> values;  // diff (logscore), then ratios
        std::vector<double> pvalues; // one-sided DM vs the baseline
    };
    std::vector<Row> rows;
    int nw_lags = 0;
};

inline ScoreReport make_report(const ModelScores& baseline, const std::vector<ModelScores>& models,
                               int nw_lags = 0) {
    ScoreReport rep;
    rep.baseline_name = baseline.name;
    rep.nw_lags = nw_lags;
    const auto cols = [&](const ModelScores& m) {
        return std::vector<const std::vector<double>*>{&m.logscore, &m.crps, &m.twcrps,
                                                       &m.qs05,     &m.qs10, &m.qs20};
    };
    for (const auto* c : cols(baseline)) rep.baseline_levels.push_back(math::mean(*c));
    for (const auto& m : models) {
        ScoreReport::Row row;
        row.name = m.name;
        const auto bc = cols(baseline);
        const auto mc = cols(m);
        for (std::size_t j = 0; j < bc.size(); ++j) {
            const double bmean = math::mean(*bc[j]);
            const double mmean = math::mean(*mc[j]);
            row.values.push_back(j == 0 ? bmean - mmean : mmean / bmean);
            row.pvalues.push_back(dm_test(*bc[j], *mc[j], true, nw_lags).p);
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

inline std::string format_report(const ScoreReport& rep) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    const char* headers[] = {"LogScore", "CRPS", "twCRPS", "QS05", "QS10", "QS20"};
    os << std::setw(28) << std::left << "model" << std::right;
    for (const char* h : headers) os << std::setw(10) << h;
    os << "\n";
    os << std::setw(28) << std::left << rep.baseline_name << std::right;
    for (double v : rep.baseline_levels) os << std::setw(10) << v;
    os << "\n";
    for (const auto& row : rep.rows) {
        os << std::setw(28) << std::left << row.name << std::right;
        for (double v : row.values) os << std::setw(10) << v;
        os << "\n" << std::setw(28) << "";
        for (double p : row.pvalues) {
            std::ostringstream ps;
            ps << std::fixed << std::setprecision(4) << "(" << p << ")";
            os << std::setw(10) << ps.str();
        }
        os << "\n";
    }
    os << "note: log-score column is baseline minus model (above zero favors the model);\n"
          "other columns are model/baseline ratios (below one favors the model);\n"
          "one-sided Diebold-Mariano p-values vs the baseline in parentheses\n";
    return os.str();
}

} // namespace skewvol

#endif // SKEWVOL_SCORING_HPP
