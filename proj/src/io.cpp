#include "kahlab/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "kahlab/errors.hpp"

namespace kahlab {

namespace {

std::string fmt17(double v) { return fmt::format("{:.17g}", v); }

// Next non-empty line, with its 1-based number.
bool next_line(std::istream& is, std::string& line, int& number) {
    while (std::getline(is, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

[[noreturn]] void bad(int line, const std::string& what) {
    throw InvalidArgument(fmt::format("surface file line {}: {}", line, what));
}

}  // namespace

void write_surface(std::ostream& os, const ImmersedSurface& s) {
    validate_surface(s);
    os << "surf " << s.n_theta << " " << s.n_phi << " " << fmt17(s.period_theta) << " "
       << fmt17(s.period_phi) << "\n";
    os << "linear";
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 2; ++c) os << " " << fmt17(s.linear_part(r, c));
    os << "\n";
    for (const Vec4& p : s.periodic_part)
        os << fmt17(p[0]) << " " << fmt17(p[1]) << " " << fmt17(p[2]) << " " << fmt17(p[3])
           << "\n";
}

ImmersedSurface read_surface(std::istream& is) {
    std::string line;
    int number = 0;
    ImmersedSurface s;

    if (!next_line(is, line, number)) bad(number, "missing header");
    {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag >> s.n_theta >> s.n_phi >> s.period_theta >> s.period_phi) || tag != "surf")
            bad(number, "expected 'surf <n_theta> <n_phi> <T_theta> <T_phi>'");
    }
    if (s.n_theta < 8 || s.n_phi < 8) bad(number, "resolutions must be at least 8");
    if (!(s.period_theta > 0.0) || !(s.period_phi > 0.0)) bad(number, "periods must be positive");

    if (!next_line(is, line, number)) bad(number, "missing linear part");
    {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag != "linear") bad(number, "expected 'linear' followed by 8 numbers");
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 2; ++c)
                if (!(ls >> s.linear_part(r, c))) bad(number, "linear part needs 8 numbers");
    }

    s.periodic_part.resize(s.node_count());
    for (std::size_t n = 0; n < s.node_count(); ++n) {
        if (!next_line(is, line, number))
            bad(number, fmt::format("expected {} node lines, found {}", s.node_count(), n));
        std::istringstream ls(line);
        Vec4& p = s.periodic_part[n];
        if (!(ls >> p[0] >> p[1] >> p[2] >> p[3])) bad(number, "node line needs 4 numbers");
    }
    if (next_line(is, line, number)) bad(number, "unexpected trailing data");
    return s;
}

void save_surface(const std::string& path, const ImmersedSurface& s) {
    std::ostringstream os;
    write_surface(os, s);
    write_text(path, os.str());
}

ImmersedSurface load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open surface file '" + path + "'");
    try {
        return read_surface(in);
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void write_trace(std::ostream& os, const std::vector<TraceRow>& trace) {
    os << "iteration,L_beta,res_l2,res_linf,min_cos_alpha,tau\n";
    for (const TraceRow& r : trace)
        os << fmt::format("{},{},{},{},{},{}\n", r.iteration, r.l_beta, r.res_l2, r.res_linf,
                          r.min_cos_alpha, r.tau);
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write '" + path + "'");
    out << text;
    if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

}  // namespace kahlab
