#include "lat/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lat/boxcount.hpp"
#include "lat/csvout.hpp"
#include "lat/fieldfile.hpp"
#include "lat/fourier.hpp"
#include "lat/lds.hpp"
#include "lat/sweep.hpp"
#include "lat/unitsgeo.hpp"
#include "lat/version.hpp"

namespace lat::cli {

namespace {

std::vector<double> parse_vec(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw BadInput("cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw BadInput("empty vector argument");
    return out;
}

std::vector<double> vec_or_zero(const std::string& text, int s) {
    if (text.empty()) return std::vector<double>(static_cast<size_t>(s), 0.0);
    auto v = parse_vec(text);
    if (static_cast<int>(v.size()) != s)
        throw BadInput("expected " + std::to_string(s) + " components");
    return v;
}

struct Output {
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file.open(path, std::ios::binary);
            if (!file) throw BadInput("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file.is_open() ? file : std::cout; }
    std::ofstream file;
};

// csv or json-lines row emission with a shared comment preamble
struct RowSink {
    RowSink(std::ostream& out, std::string format, std::vector<std::string> cols)
        : out_(out), fmt_(std::move(format)), cols_(std::move(cols)), csv_(out) {
        if (fmt_ != "csv" && fmt_ != "json-lines") throw BadInput("format must be csv or json-lines");
    }
    void preamble(const std::vector<std::string>& lines) {
        if (fmt_ == "csv") {
            for (const auto& l : lines) csv_.comment(l);
            csv_.header(cols_);
        }
    }
    static bool numeric(const std::string& cell) {
        char* end = nullptr;
        std::strtod(cell.c_str(), &end);
        return end && *end == '\0' && end != cell.c_str();
    }
    void row(const std::vector<std::string>& cells) {
        if (fmt_ == "csv") {
            csv_.row(cells);
            return;
        }
        out_ << "{";
        for (size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << "\"" << cols_[i] << "\":";
            if (numeric(cells[i]))
                out_ << cells[i];
            else
                out_ << "\"" << cells[i] << "\"";
        }
        out_ << "}\n";
    }
    std::ostream& out_;
    std::string fmt_;
    std::vector<std::string> cols_;
    CsvWriter csv_;
};

struct Common {
    std::string field_file;
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t seed = 1;
    std::string shift;
};

void add_common(CLI::App* cmd, Common& c, bool needs_field = true) {
    auto* f = cmd->add_option("--field", c.field_file, "field data file (.fld)");
    if (needs_field) f->required();
    cmd->add_option("--out", c.out, "output path ('-' = stdout)");
    cmd->add_option("--format", c.format, "csv | json-lines");
    cmd->add_option("--seed", c.seed, "RNG seed for sampled modes");
    cmd->add_option("--shift", c.shift, "translation vector x (comma separated)");
}

struct Loaded {
    FieldData data;
    Lattice lattice;
};

Loaded load(const Common& c) {
    FieldData d = load_field_file(c.field_file);
    Lattice g = Lattice::from_module(ModuleBasis{d.basis, d.label}, d.precision_bits);
    return Loaded{std::move(d), std::move(g)};
}

std::vector<std::string> preamble_lines(const Common& c, const std::string& cmd,
                                        const std::string& params) {
    return {std::string("lat ") + kVersion,
            "command=" + cmd + " field=" + (c.field_file.empty() ? "-" : c.field_file),
            "seed=" + std::to_string(c.seed) + (params.empty() ? "" : " " + params)};
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"admissible-lattice point counting, remainder and discrepancy experiments"};
    app.set_version_flag("--version", std::string("lat ") + kVersion);
    int threads = 1;
    if (const char* env = std::getenv("LAT_THREADS")) threads = std::atoi(env);
    app.add_option("--threads", threads, "worker thread hint");

    // ---- field ----------------------------------------------------------
    Common c_field;
    auto* cmd_field = app.add_subcommand("field", "validate a field file and print a summary");
    add_common(cmd_field, c_field);

    // ---- lattice --------------------------------------------------------
    Common c_lat;
    auto* cmd_lat = app.add_subcommand("lattice", "build the embedding lattice and serialize it");
    add_common(cmd_lat, c_lat);
    bool lat_dual = false;
    cmd_lat->add_flag("--dual", lat_dual, "emit the dual lattice instead");

    // ---- count / remainder ----------------------------------------------
    Common c_count, c_rem;
    std::string count_box, rem_box;
    auto* cmd_count = app.add_subcommand("count", "exact lattice point count in a box");
    add_common(cmd_count, c_count);
    cmd_count->add_option("--box", count_box, "box side lengths, comma separated")->required();
    auto* cmd_rem = app.add_subcommand("remainder", "count minus volume/det for a box");
    add_common(cmd_rem, c_rem);
    cmd_rem->add_option("--box", rem_box, "box side lengths, comma separated")->required();

    // ---- supsearch --------------------------------------------------------
    Common c_sup;
    std::string sup_box, sup_mode = "exact_sweep";
    auto* cmd_sup = app.add_subcommand("supsearch", "sup over theta of |R(B_theta.N + x)|");
    add_common(cmd_sup, c_sup);
    cmd_sup->add_option("--box", sup_box, "box side lengths N_i")->required();
    cmd_sup->add_option("--mode", sup_mode, "exact_sweep | sampled");

    // ---- growth -----------------------------------------------------------
    Common c_gr;
    double gr_nmin = 16, gr_nmax = 16384;
    int gr_nsteps = 0;
    std::string gr_aspect, gr_mode = "exact_sweep";
    auto* cmd_gr = app.add_subcommand("growth", "sup|R| growth experiment over a range of N");
    add_common(cmd_gr, c_gr);
    cmd_gr->add_option("--nmin", gr_nmin, "smallest total volume N");
    cmd_gr->add_option("--nmax", gr_nmax, "largest total volume N");
    cmd_gr->add_option("--nsteps", gr_nsteps, "row count (default: one per doubling)");
    cmd_gr->add_option("--aspect", gr_aspect, "box aspect ratios (normalized to product 1)");
    cmd_gr->add_option("--mode", gr_mode, "exact_sweep | sampled");

    // ---- poisson ----------------------------------------------------------
    Common c_poi;
    std::string poi_n, poi_theta, poi_tau = "auto";
    double poi_cutoff = 768.0;
    int poi_nodes = 2048;
    auto* cmd_poi = app.add_subcommand("poisson", "truncated dual-sum remainder vs direct count");
    add_common(cmd_poi, c_poi);
    cmd_poi->add_option("--N", poi_n, "box side lengths N_i")->required();
    cmd_poi->add_option("--theta", poi_theta, "dilation theta in [0,1]^s (default all 1)");
    cmd_poi->add_option("--tau", poi_tau, "smoothing scale, or 'auto' for (N1...Ns)^-2");
    cmd_poi->add_option("--cutoff", poi_cutoff, "dual point cutoff ||gamma||_inf");
    cmd_poi->add_option("--nodes", poi_nodes, "kernel quadrature nodes");

    // ---- units / reduce / fdomain-enum ------------------------------------
    Common c_units;
    auto* cmd_units = app.add_subcommand("units", "unit-system operations");
    auto* cmd_units_verify = cmd_units->add_subcommand("verify", "validate the bundled units");
    add_common(cmd_units_verify, c_units);

    Common c_red;
    std::string red_point;
    auto* cmd_red = app.add_subcommand("reduce", "reduce a point to the fundamental domain");
    add_common(cmd_red, c_red);
    cmd_red->add_option("--point", red_point, "point y (comma separated)")->required();

    Common c_fde;
    std::string fde_maxnorm = "50";
    long long fde_radius = 40;
    auto* cmd_fde = app.add_subcommand("fdomain-enum",
                                       "norm-sorted fundamental-domain representatives");
    add_common(cmd_fde, c_fde);
    cmd_fde->add_option("--max-norm", fde_maxnorm, "|Nm| bound (rational)");
    cmd_fde->add_option("--radius", fde_radius, "coefficient enumeration radius");

    // ---- lds ---------------------------------------------------------------
    auto* cmd_lds = app.add_subcommand("lds", "low-discrepancy point-set operations");
    Common c_gen;
    long long gen_n = 256;
    auto* cmd_gen = cmd_lds->add_subcommand("gen", "generate a point set");
    add_common(cmd_gen, c_gen);
    cmd_gen->add_option("--n", gen_n, "window count n");

    Common c_ds;
    long long ds_n = 256, ds_prefix = 0;
    std::string ds_mode = "exact", ds_points;
    auto* cmd_ds = cmd_lds->add_subcommand("dstar", "star discrepancy of a (prefix of a) point set");
    add_common(cmd_ds, c_ds, /*needs_field=*/false);
    cmd_ds->add_option("--n", ds_n, "window count n (when generating)");
    cmd_ds->add_option("--prefix", ds_prefix, "prefix length m (default: all points)");
    cmd_ds->add_option("--mode", ds_mode, "exact | lower_bound");
    cmd_ds->add_option("--points", ds_points, "read a point-set file instead of generating");

    Common c_sw;
    long long sw_nmin = 16, sw_nmax = 4096;
    auto* cmd_sw = cmd_lds->add_subcommand("sweep", "D* quality sweep over a range of n");
    add_common(cmd_sw, c_sw);
    cmd_sw->add_option("--nmin", sw_nmin, "smallest n");
    cmd_sw->add_option("--nmax", sw_nmax, "largest n");

    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_max_threads(threads);

    try {
        if (*cmd_field) {
            FieldData d = load_field_file(c_field.field_file);
            Output o(c_field.out);
            auto& os = o.stream();
            os << "label: " << d.label << "\n";
            os << "degree: " << d.field->degree() << "\n";
            os << "discriminant(minpoly): " << d.field->discriminant().get_str() << "\n";
            auto roots = d.field->root_enclosures(d.precision_bits);
            os << "roots:";
            for (const auto& r : roots) os << " " << fmt_g17(r.mid_double());
            os << "\n";
            UnitSystem u = UnitSystem::build(d.units);
            os << "regulator: " << fmt_g17(u.regulator()) << "\n";
            os << "units: ok\n";
            return 0;
        }
        if (*cmd_lat) {
            Loaded l = load(c_lat);
            Output o(c_lat.out);
            o.stream() << (lat_dual ? l.lattice.dual() : l.lattice).to_json() << "\n";
            return 0;
        }
        if (*cmd_count || *cmd_rem) {
            const Common& c = *cmd_count ? c_count : c_rem;
            Loaded l = load(c);
            auto lengths = parse_vec(*cmd_count ? count_box : rem_box);
            auto x = vec_or_zero(c.shift, l.lattice.dim());
            Box b{x, lengths};
            RemainderReport rep = remainder(l.lattice, b);
            Output o(c.out);
            RowSink sink(o.stream(), c.format, {"count", "volume", "det", "remainder"});
            sink.preamble(preamble_lines(c, *cmd_count ? "count" : "remainder", ""));
            sink.row({CsvWriter::cell(rep.count), CsvWriter::cell(rep.volume),
                      CsvWriter::cell(rep.det), CsvWriter::cell(rep.remainder)});
            return 0;
        }
        if (*cmd_sup) {
            Loaded l = load(c_sup);
            auto nvec = parse_vec(sup_box);
            auto x = vec_or_zero(c_sup.shift, l.lattice.dim());
            SupMode mode = sup_mode == "sampled" ? SupMode::sampled : SupMode::exact_sweep;
            if (sup_mode != "sampled" && sup_mode != "exact_sweep")
                throw BadInput("mode must be exact_sweep or sampled");
            SupSearchResult r = sup_remainder(l.lattice, nvec, x, mode, c_sup.seed);
            std::vector<std::string> cols{"sup_abs_R"};
            for (int j = 0; j < l.lattice.dim(); ++j)
                cols.push_back("theta" + std::to_string(j + 1));
            cols.push_back("attained");
            cols.push_back("cells");
            Output o(c_sup.out);
            RowSink sink(o.stream(), c_sup.format, cols);
            sink.preamble(preamble_lines(c_sup, "supsearch", "mode=" + sup_mode));
            std::vector<std::string> cells{CsvWriter::cell(r.sup_abs_remainder)};
            for (double t : r.theta_star) cells.push_back(CsvWriter::cell(t));
            cells.push_back(r.attained ? "true" : "false");
            cells.push_back(CsvWriter::cell(r.cells_visited));
            sink.row(cells);
            return 0;
        }
        if (*cmd_gr) {
            Loaded l = load(c_gr);
            const int s = l.lattice.dim();
            auto x = vec_or_zero(c_gr.shift, s);
            std::vector<double> aspect = gr_aspect.empty()
                                             ? std::vector<double>(static_cast<size_t>(s), 1.0)
                                             : parse_vec(gr_aspect);
            std::vector<double> n_list;
            if (gr_nsteps <= 0) {
                for (double n = gr_nmin; n <= gr_nmax * (1 + 1e-12); n *= 2) n_list.push_back(n);
            } else if (gr_nsteps == 1) {
                n_list.push_back(gr_nmin);
            } else {
                double ratio = std::pow(gr_nmax / gr_nmin, 1.0 / (gr_nsteps - 1));
                for (int i = 0; i < gr_nsteps; ++i)
                    n_list.push_back(gr_nmin * std::pow(ratio, i));
            }
            SupMode mode = gr_mode == "sampled" ? SupMode::sampled : SupMode::exact_sweep;
            auto rows = growth_experiment(l.lattice, x, n_list, aspect, mode, c_gr.seed);
            std::vector<std::string> cols{"N", "ln_N", "sup_abs_R"};
            for (int j = 0; j < s; ++j) cols.push_back("theta" + std::to_string(j + 1));
            cols.push_back("mode");
            Output o(c_gr.out);
            RowSink sink(o.stream(), c_gr.format, cols);
            sink.preamble(preamble_lines(
                c_gr, "growth",
                "nmin=" + fmt_g17(gr_nmin) + " nmax=" + fmt_g17(gr_nmax) +
                    " nsteps=" + std::to_string(gr_nsteps) + " mode=" + gr_mode));
            for (const auto& r : rows) {
                std::vector<std::string> cells{CsvWriter::cell(r.n_total),
                                               CsvWriter::cell(r.ln_n),
                                               CsvWriter::cell(r.sup_abs_r)};
                for (double t : r.theta) cells.push_back(CsvWriter::cell(t));
                cells.push_back(r.mode);
                sink.row(cells);
            }
            return 0;
        }
        if (*cmd_poi) {
            Loaded l = load(c_poi);
            const int s = l.lattice.dim();
            auto nvec = parse_vec(poi_n);
            auto theta = poi_theta.empty() ? std::vector<double>(static_cast<size_t>(s), 1.0)
                                           : parse_vec(poi_theta);
            auto x = vec_or_zero(c_poi.shift, s);
            if (static_cast<int>(nvec.size()) != s || static_cast<int>(theta.size()) != s)
                throw BadInput("dimension mismatch");
            std::vector<double> lengths(static_cast<size_t>(s));
            double ntot = 1.0;
            for (int j = 0; j < s; ++j) ntot *= nvec[static_cast<size_t>(j)];
            for (int j = 0; j < s; ++j)
                lengths[static_cast<size_t>(j)] =
                    theta[static_cast<size_t>(j)] * nvec[static_cast<size_t>(j)];
            PoissonParams params;
            params.cutoff_radius = poi_cutoff;
            params.quadrature_nodes = poi_nodes;
            params.tau = (poi_tau == "auto") ? 1.0 / (ntot * ntot) : std::stod(poi_tau);
            SmoothingKernel kernel(poi_nodes);
            Box b{x, lengths};
            PoissonResult pr = poisson_remainder(l.lattice, Box{std::vector<double>(
                                                      static_cast<size_t>(s), 0.0),
                                                  lengths},
                                                 x, params, kernel);
            RemainderReport direct = remainder(l.lattice, b);
            Output o(c_poi.out);
            RowSink sink(o.stream(), c_poi.format, {"R_direct", "R_poisson", "band", "budget"});
            sink.preamble(preamble_lines(c_poi, "poisson",
                                         "tau=" + fmt_g17(params.tau) +
                                             " cutoff=" + fmt_g17(params.cutoff_radius)));
            sink.row({CsvWriter::cell(direct.remainder), CsvWriter::cell(pr.r_dotdot),
                      CsvWriter::cell(std::pow(2.0, s)), CsvWriter::cell(pr.truncation_budget)});
            return 0;
        }
        if (*cmd_units_verify) {
            FieldData d = load_field_file(c_units.field_file);
            UnitSystem u = UnitSystem::build(d.units);
            Output o(c_units.out);
            auto& os = o.stream();
            os << "units: " << d.units.size() << "\n";
            os << "regulator: " << fmt_g17(u.regulator()) << "\n";
            for (const auto& e : d.units) os << "norm: " << e.norm().get_str() << "\n";
            os << "ok\n";
            return 0;
        }
        if (*cmd_red) {
            Loaded l = load(c_red);
            UnitSystem u = UnitSystem::build(l.data.units);
            auto y = parse_vec(red_point);
            ReduceResult r = u.reduce_to_F(y);
            std::vector<std::string> cols;
            for (size_t i = 0; i < r.k.size(); ++i) cols.push_back("k" + std::to_string(i + 1));
            cols.push_back("sign_flip");
            for (int j = 0; j < l.lattice.dim(); ++j) cols.push_back("y" + std::to_string(j + 1));
            Output o(c_red.out);
            RowSink sink(o.stream(), c_red.format, cols);
            sink.preamble(preamble_lines(c_red, "reduce", ""));
            std::vector<std::string> cells;
            for (long long k : r.k) cells.push_back(CsvWriter::cell(k));
            cells.push_back(r.sign_flip ? "true" : "false");
            for (double v : r.y_reduced) cells.push_back(CsvWriter::cell(v));
            sink.row(cells);
            return 0;
        }
        if (*cmd_fde) {
            Loaded l = load(c_fde);
            UnitSystem u = UnitSystem::build(l.data.units);
            bool incomplete = false;
            auto pts = enumerate_F_norm_bounded(l.lattice, u, rat_parse(fde_maxnorm),
                                                fde_radius, &incomplete);
            const int s = l.lattice.dim();
            std::vector<std::string> cols{"k", "abs_norm"};
            for (int j = 0; j < s; ++j) cols.push_back("c" + std::to_string(j + 1));
            for (int j = 0; j < s; ++j) cols.push_back("x" + std::to_string(j + 1));
            Output o(c_fde.out);
            RowSink sink(o.stream(), c_fde.format, cols);
            auto pre = preamble_lines(c_fde, "fdomain-enum",
                                      "max_norm=" + fde_maxnorm +
                                          " radius=" + std::to_string(fde_radius));
            if (incomplete)
                pre.push_back("warning: IncompleteEnumeration (radius may miss points)");
            sink.preamble(pre);
            long long k = 1;
            for (const auto& p : pts) {
                std::vector<std::string> cells{CsvWriter::cell(k++),
                                               p.abs_norm.get_str()};
                for (long long cc : p.coeffs) cells.push_back(CsvWriter::cell(cc));
                for (double v : p.coords) cells.push_back(CsvWriter::cell(v));
                sink.row(cells);
            }
            if (incomplete)
                std::cerr << "warning: enumeration radius provably may miss points\n";
            return 0;
        }
        if (*cmd_gen) {
            Loaded l = load(c_gen);
            auto x = vec_or_zero(c_gen.shift, l.lattice.dim());
            PointSet ps = generate_pointset(l.lattice, x, gen_n);
            Output o(c_gen.out);
            o.stream() << pointset_to_text(ps);
            return 0;
        }
        if (*cmd_ds) {
            PointSet ps;
            if (!ds_points.empty()) {
                std::ifstream in(ds_points);
                if (!in) throw BadInput("cannot open point file '" + ds_points + "'");
                std::ostringstream ss;
                ss << in.rdbuf();
                ps = pointset_from_text(ss.str());
            } else {
                if (c_ds.field_file.empty()) throw BadInput("need --field or --points");
                Loaded l = load(c_ds);
                auto x = vec_or_zero(c_ds.shift, l.lattice.dim());
                ps = generate_pointset(l.lattice, x, ds_n);
            }
            long long prefix = ds_prefix > 0 ? ds_prefix : ps.count;
            DStarMode mode = ds_mode == "lower_bound" ? DStarMode::lower_bound : DStarMode::exact;
            if (ds_mode != "exact" && ds_mode != "lower_bound")
                throw BadInput("mode must be exact or lower_bound");
            DiscrepancyReport rep = star_discrepancy(ps, prefix, mode, c_ds.seed);
            std::vector<std::string> cols{"prefix", "d_star", "n_dstar"};
            for (int j = 0; j < ps.s; ++j) cols.push_back("y" + std::to_string(j + 1));
            cols.push_back("attained");
            Output o(c_ds.out);
            RowSink sink(o.stream(), c_ds.format, cols);
            sink.preamble(preamble_lines(c_ds, "lds dstar", "mode=" + ds_mode));
            std::vector<std::string> cells{CsvWriter::cell(prefix), CsvWriter::cell(rep.d_star),
                                           CsvWriter::cell(rep.n_dstar)};
            for (double v : rep.witness_box) cells.push_back(CsvWriter::cell(v));
            cells.push_back(rep.attained ? "true" : "false");
            sink.row(cells);
            return 0;
        }
        if (*cmd_sw) {
            Loaded l = load(c_sw);
            auto x = vec_or_zero(c_sw.shift, l.lattice.dim());
            Output o(c_sw.out);
            RowSink sink(o.stream(), c_sw.format,
                         {"n", "count", "d_star", "n_d_star", "n_d_star_over_1_plus_ln_n",
                          "prefix_sup"});
            sink.preamble(preamble_lines(c_sw, "lds sweep",
                                         "nmin=" + std::to_string(sw_nmin) +
                                             " nmax=" + std::to_string(sw_nmax)));
            for (long long n = sw_nmin; n <= sw_nmax; n *= 2) {
                PointSet ps = generate_pointset(l.lattice, x, n);
                DiscrepancyReport rep = star_discrepancy(ps, ps.count, DStarMode::exact);
                auto rows = prefix_sup_experiment(ps, c_sw.seed);
                double psup = rows.empty() ? 0.0 : rows.back().running_sup;
                double ndn = static_cast<double>(ps.count) * rep.d_star;
                sink.row({CsvWriter::cell(n), CsvWriter::cell(ps.count),
                          CsvWriter::cell(rep.d_star), CsvWriter::cell(ndn),
                          CsvWriter::cell(ndn / (1.0 + std::log(static_cast<double>(n)))),
                          CsvWriter::cell(psup)});
            }
            return 0;
        }
        std::cerr << app.help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace lat::cli
