#ifndef SPECURVE_IO_HPP
#define SPECURVE_IO_HPP

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "measures.hpp"
#include "symmetric.hpp"

namespace specurve {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// curve document {v, a, alpha, p1, p0}, coefficients by ascending degree

inline json curve_to_json(const SpectralCurve& c) {
    json j;
    j["v"] = json::array();
    for (int k = 1; k <= c.V.degree(); ++k) j["v"].push_back(c.V.vcoeff(k));
    j["a"] = c.a;
    j["alpha"] = c.alpha;
    j["p1"] = json::array();
    for (int k = 0; k <= c.p1.degree(); ++k) j["p1"].push_back(c.p1.coeff(k));
    j["p0"] = json::array();
    for (int k = 0; k <= c.p0.degree(); ++k) j["p0"].push_back(c.p0.coeff(k));
    return j;
}

inline SpectralCurve curve_from_json(const json& j) {
    SpectralCurve c;
    std::vector<double> v = j.at("v").get<std::vector<double>>();
    c.V = Potential<double>(v);
    c.a = j.at("a").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.p1 = Poly<double>(j.at("p1").get<std::vector<double>>());
    c.p0 = Poly<double>(j.at("p0").get<std::vector<double>>());
    if (!(c.a > 0) || !(c.alpha > 0 && c.alpha < 1))
        throw std::invalid_argument("curve_from_json: need a > 0 and alpha in (0,1)");
    return c;
}

// ---------------------------------------------------------------------------
// CSV writers (deterministic %.17g formatting)

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    }
    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i)
            out_ << (i ? "," : "") << names[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i)
            out_ << (i ? "," : "") << format_double(vals[i]);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

inline void write_density_csv(const std::string& path, const SpectralCurve& curve,
                              const SupportSet& supp, int points_per_interval = 512) {
    CsvWriter csv(path);
    csv.header({"x", "rho"});
    for (const auto& iv : supp.intervals) {
        for (int k = 0; k <= points_per_interval; ++k) {
            double x = iv.lo + (iv.hi - iv.lo) * 0.5 * (1.0 - std::cos(M_PI * k / points_per_interval));
            csv.row({x, density(curve, x)});
        }
    }
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv(path);
    csv.header({"t", "re_z", "im_z", "invariant_drift"});
    double t = 0;
    for (std::size_t i = 0; i < traj.points.size(); ++i) {
        if (i) t += std::abs(traj.points[i] - traj.points[i - 1]);
        double drift = traj.drifts.empty() ? traj.invariant_drift
                                           : traj.drifts[std::min(i, traj.drifts.size() - 1)];
        csv.row({t, traj.points[i].real(), traj.points[i].imag(), drift});
    }
}

inline void write_polyline_csv(const std::string& path, const Polyline& poly) {
    CsvWriter csv(path);
    csv.header({"t", "re_z", "im_z"});
    double t = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (i) t += std::abs(poly[i] - poly[i - 1]);
        csv.row({t, poly[i].real(), poly[i].imag()});
    }
}

inline json polyline_to_json(const Polyline& poly) {
    json j = json::array();
    for (const auto& p : poly) j.push_back({p.real(), p.imag()});
    return j;
}

inline void write_profile_csv(const std::string& path, const DensityProfile& prof) {
    CsvWriter csv(path);
    csv.header({"re_s", "im_s", "density"});
    for (const auto& ch : prof.chains)
        for (std::size_t i = 0; i < ch.points.size(); ++i)
            csv.row({ch.points[i].real(), ch.points[i].imag(), ch.values[i]});
}

inline void write_nu2_csv(const std::string& path, const ConstrainedPair& pair) {
    CsvWriter csv(path);
    csv.header({"y", "density", "sigma_level"});
    if (pair.y_star > 0) {
        for (int k = 0; k <= 64; ++k) {
            double y = pair.y_star * k / 64.0;
            csv.row({y, pair.sigma_level, pair.sigma_level});
        }
    }
    for (std::size_t i = 0; i < pair.ys.size(); ++i)
        csv.row({pair.ys[i], pair.rho[i], pair.sigma_level});
}

// ---------------------------------------------------------------------------
// static SVG figures

class SvgWriter {
  public:
    SvgWriter(const std::string& path, double xlo, double xhi, double ylo, double yhi,
              int width = 900, int height = 600)
        : out_(path), xlo_(xlo), xhi_(xhi), ylo_(ylo), yhi_(yhi), w_(width), h_(height) {
        if (!out_) throw std::runtime_error("SvgWriter: cannot open " + path);
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
             << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n"
             << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        // axes
        polyline({{xlo_, 0.0}, {xhi_, 0.0}}, "#888888", 1.0);
        polyline({{0.0, ylo_}, {0.0, yhi_}}, "#888888", 1.0);
    }
    ~SvgWriter() { out_ << "</svg>\n"; }

    void polyline(const Polyline& pts, const std::string& color, double width = 1.5,
                  bool dashed = false) {
        if (pts.size() < 2) return;
        out_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
             << "\"";
        if (dashed) out_ << " stroke-dasharray=\"6 4\"";
        out_ << " points=\"";
        for (const auto& p : pts) out_ << px(p.real()) << "," << py(p.imag()) << " ";
        out_ << "\"/>\n";
    }
    void dot(const Cd& p, const std::string& color, double r = 4) {
        out_ << "<circle cx=\"" << px(p.real()) << "\" cy=\"" << py(p.imag()) << "\" r=\"" << r
             << "\" fill=\"" << color << "\"/>\n";
    }
    void graph(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& color, double width = 1.5) {
        Polyline pts;
        for (std::size_t i = 0; i < xs.size(); ++i) pts.push_back(Cd(xs[i], ys[i]));
        polyline(pts, color, width);
    }

  private:
    double px(double x) const { return (x - xlo_) / (xhi_ - xlo_) * (w_ - 40) + 20; }
    double py(double y) const { return h_ - 20 - (y - ylo_) / (yhi_ - ylo_) * (h_ - 40); }
    std::ofstream out_;
    double xlo_, xhi_, ylo_, yhi_;
    int w_, h_;
};

/// Critical-graph figure: support (black), Gamma* split into the orthogonal
/// arcs (blue) and the Delta3 arc (red, dashed), branch points as dots.
inline void write_critical_graph_svg(const std::string& path, const SpectralCurve& curve,
                                     const RegimeReport& regime, const GammaStar& gamma) {
    double xmax = 1, ymax = 1;
    for (const auto& p : gamma.points) {
        xmax = std::max(xmax, std::abs(p.real()));
        ymax = std::max(ymax, std::abs(p.imag()));
    }
    xmax = std::min(xmax, 1.5 * (std::abs(regime.support.hi()) + std::abs(regime.support.lo())));
    SvgWriter svg(path, -xmax, xmax, -ymax, ymax);
    for (const auto& iv : regime.support.intervals)
        svg.polyline({{iv.lo, 0.0}, {iv.hi, 0.0}}, "#000000", 3.0);
    svg.polyline(gamma.points, "#1f77b4", 1.5);
    if (!gamma.delta3.empty()) svg.polyline(gamma.delta3, "#d62728", 2.0, true);
    for (const auto& b : regime.bps.real_points) svg.dot(b.location, "#2ca02c");
    for (const auto& b : regime.bps.upper_pairs) {
        svg.dot(b.location, "#9467bd");
        svg.dot(std::conj(b.location), "#9467bd");
    }
    (void)curve;
}

inline void write_density_svg(const std::string& path, const SpectralCurve& curve,
                              const SupportSet& supp) {
    double ymax = 0;
    std::vector<double> xs, ys;
    for (const auto& iv : supp.intervals) {
        for (int k = 0; k <= 400; ++k) {
            double x = iv.lo + (iv.hi - iv.lo) * k / 400.0;
            double r = density(curve, x);
            xs.push_back(x);
            ys.push_back(r);
            ymax = std::max(ymax, r);
        }
        xs.push_back(std::nan(""));
        ys.push_back(std::nan(""));
    }
    SvgWriter svg(path, supp.lo() - 0.5, supp.hi() + 0.5, -0.05 * ymax, 1.1 * ymax);
    Polyline run;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(xs[i])) {
            svg.polyline(run, "#1f77b4", 2.0);
            run.clear();
        } else {
            run.push_back(Cd(xs[i], ys[i]));
        }
    }
}

inline void write_nu2_svg(const std::string& path, const ConstrainedPair& pair) {
    double ymax = pair.sigma_level * 1.2;
    double span = std::min(pair.grid_span, 8.0);
    SvgWriter svg(path, 0, span, 0, ymax);
    std::vector<double> xs, ys;
    if (pair.y_star > 0)
        for (int k = 0; k <= 32; ++k) {
            xs.push_back(pair.y_star * k / 32.0);
            ys.push_back(pair.sigma_level);
        }
    for (std::size_t i = 0; i < pair.ys.size(); ++i) {
        if (pair.ys[i] > span) break;
        xs.push_back(pair.ys[i]);
        ys.push_back(pair.rho[i]);
    }
    svg.graph(xs, ys, "#d62728", 2.0);
    svg.polyline({{0.0, pair.sigma_level}, {span, pair.sigma_level}}, "#888888", 1.0, true);
}

// ---------------------------------------------------------------------------
// extended-precision lattice cache: one record per index, decimal strings

template <class R> std::string scalar_to_string(const R& v, int digits) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

template <class R> json mop_record_to_json(const MopRecord<R>& rec, int digits) {
    json j;
    j["k1"] = rec.index.k1;
    j["k2"] = rec.index.k2;
    j["N"] = rec.N;
    auto poly_arr = [&](const Poly<R>& p) {
        json a = json::array();
        for (int t = 0; t <= p.degree(); ++t) a.push_back(scalar_to_string(p.coeff(t), digits));
        return a;
    };
    j["P"] = poly_arr(rec.P);
    j["A1"] = poly_arr(rec.A1);
    j["A2"] = poly_arr(rec.A2);
    j["gamma1"] = scalar_to_string(rec.gamma1, digits);
    j["gamma2"] = scalar_to_string(rec.gamma2, digits);
    j["zeros"] = json::array();
    for (const auto& z : rec.zeros) j["zeros"].push_back(scalar_to_string(z, digits));
    j["condition_estimate"] = rec.condition_estimate;
    j["orthogonality_residual"] = rec.orthogonality_residual;
    return j;
}

} // namespace specurve

#endif
