#ifndef LRA_ARTIFACTS_HPP
#define LRA_ARTIFACTS_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lra/config.hpp"
#include "lra/error.hpp"
#include "lra/factorization.hpp"
#include "lra/pipeline.hpp"
#include "lra/relation_matrix.hpp"
#include "lra/similarity.hpp"

// Files written by `lra pipeline` into its output directory:
//   manifest.txt       LRARUN1 magic, config snapshot, input digests, timings, file list
//   build_report.txt   counts and per-step elapsed times
//   matrix_raw.txt     "m n nnz 0" then "row col value" triplets
//   matrix.txt         same, log-entropy weighted ("... 1")
//   rows.tsv           index left right
//   cols.tsv           index orientation pattern
//   proj.tsv           "m dim" then one row of values per line
//   alternates.tsv     original left/right, version left/right, thesaurus score, frequency

namespace lra::artifacts {

inline constexpr std::string_view run_magic = "LRARUN1";

inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad number '" + s + "'");
    return v;
}

/// FNV-1a 64-bit digest of a file, as 16 hex digits.
inline std::string file_digest(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline void write_matrix(std::ostream& os, const SparseRelationMatrix& x) {
    os << x.m() << ' ' << x.n() << ' ' << x.nnz() << ' ' << (x.weighted() ? 1 : 0) << '\n';
    for (std::size_t r = 0; r < x.m(); ++r)
        for (const auto& e : x.row(r)) os << r << ' ' << e.col << ' ' << format_double(e.value) << '\n';
}

inline void write_rows(std::ostream& os, const std::vector<WordPair>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) os << i << '\t' << rows[i].left << '\t' << rows[i].right << '\n';
}

inline void write_columns(std::ostream& os, const std::vector<ColumnKey>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i)
        os << i << '\t' << to_string(cols[i].orientation) << '\t' << cols[i].pattern.canonical() << '\n';
}

inline void write_projection(std::ostream& os, const ProjectedSpace& space) {
    os << space.rows() << ' ' << space.dimension() << '\n';
    for (std::size_t r = 0; r < space.rows(); ++r) {
        const auto row = space.vectors().row(r);
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "\t" : "") << format_double(row[c]);
        os << '\n';
    }
}

inline void write_alternates(std::ostream& os, const std::vector<AlternateSet>& sets) {
    for (const auto& s : sets) {
        os << s.original.left << '\t' << s.original.right << '\t' << s.original.left << '\t' << s.original.right
           << "\tNA\t" << s.original_freq << '\n';
        for (const auto& a : s.alternates)
            os << s.original.left << '\t' << s.original.right << '\t' << a.pair.left << '\t' << a.pair.right << '\t'
               << format_double(a.lin_score) << '\t' << a.corpus_freq << '\n';
    }
}

namespace detail {

inline std::ifstream open(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw InputError("missing artifact " + p.string());
    return is;
}

inline std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        f.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return f;
}

} // namespace detail

inline std::vector<WordPair> read_rows(std::istream& is) {
    std::vector<WordPair> rows;
    std::string line;
    while (std::getline(is, line)) {
        const auto f = detail::fields(line);
        if (f.size() != 3 || f[0] != std::to_string(rows.size())) throw InputError("bad rows.tsv line: " + line);
        rows.emplace_back(f[1], f[2]);
    }
    return rows;
}

inline ProjectedSpace read_projection(std::istream& is, std::vector<WordPair> rows) {
    std::size_t m = 0, dim = 0;
    std::string line;
    if (!std::getline(is, line)) throw InputError("empty proj.tsv");
    {
        std::istringstream hs(line);
        if (!(hs >> m >> dim)) throw InputError("bad proj.tsv header");
    }
    if (m != rows.size()) throw InputError("proj.tsv has " + std::to_string(m) + " rows, rows.tsv has " + std::to_string(rows.size()));
    DenseMatrix v(m, dim);
    for (std::size_t r = 0; r < m; ++r) {
        if (!std::getline(is, line)) throw InputError("truncated proj.tsv");
        const auto f = dim == 0 ? std::vector<std::string>{} : detail::fields(line);
        if (f.size() != dim) throw InputError("proj.tsv row " + std::to_string(r) + " has wrong width");
        for (std::size_t c = 0; c < dim; ++c) v(r, c) = parse_double(f[c]);
    }
    return ProjectedSpace(std::move(v), std::move(rows));
}

inline std::vector<AlternateSet> read_alternates(std::istream& is) {
    std::vector<AlternateSet> sets;
    std::string line;
    while (std::getline(is, line)) {
        const auto f = detail::fields(line);
        if (f.size() != 6) throw InputError("bad alternates.tsv line: " + line);
        WordPair original(f[0], f[1]);
        WordPair version(f[2], f[3]);
        std::uint64_t freq = 0;
        if (const auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), freq);
            ec != std::errc() || ptr != f[5].data() + f[5].size())
            throw InputError("bad frequency in alternates.tsv line: " + line);
        if (f[4] == "NA") {
            if (original != version) throw InputError("bad alternates.tsv original line: " + line);
            sets.push_back({original, freq, {}});
        } else {
            if (sets.empty() || sets.back().original != original) throw InputError("alternate without its original: " + line);
            sets.back().alternates.push_back({version, parse_double(f[4]), freq});
        }
    }
    return sets;
}

struct Manifest {
    std::map<std::string, std::string> entries;

    void write(std::ostream& os) const {
        os << run_magic << '\n';
        for (const auto& [k, v] : entries) os << k << " = " << v << '\n';
    }

    static Manifest read(std::istream& is) {
        std::string line;
        if (!std::getline(is, line) || line != run_magic)
            throw InputError("artifact version mismatch: expected " + std::string(run_magic));
        Manifest m;
        while (std::getline(is, line)) {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos) continue;
            m.entries[line.substr(0, eq)] = line.substr(eq + 3);
        }
        return m;
    }
};

struct SaveInputs {
    LraConfig config;
    std::map<std::string, std::filesystem::path> inputs; // role -> path, digested into the manifest
};

/// Writes every artifact of a pipeline run. Data files are byte-identical
/// for identical inputs; only manifest.txt and build_report.txt carry
/// wall-clock timings.
inline void save_run(const std::filesystem::path& dir, const PipelineResult& result, const SaveInputs& in) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
    const auto out = [&](const char* name, auto&& writer) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw InputError("cannot write " + (dir / name).string());
        writer(os);
        if (!os) throw InputError("write failed: " + (dir / name).string());
    };
    out("matrix_raw.txt", [&](std::ostream& os) { write_matrix(os, result.raw); });
    out("matrix.txt", [&](std::ostream& os) { write_matrix(os, result.weighted); });
    out("rows.tsv", [&](std::ostream& os) { write_rows(os, result.weighted.row_pairs()); });
    out("cols.tsv", [&](std::ostream& os) { write_columns(os, result.weighted.columns()); });
    out("proj.tsv", [&](std::ostream& os) { write_projection(os, result.space.space()); });
    out("alternates.tsv", [&](std::ostream& os) { write_alternates(os, result.alternate_sets); });
    out("build_report.txt", [&](std::ostream& os) { result.report.write(os); });

    Manifest m;
    std::ostringstream cfg;
    in.config.write(cfg);
    std::istringstream lines(cfg.str());
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find(" = ");
        m.entries["config." + line.substr(0, eq)] = line.substr(eq + 3);
    }
    for (const auto& [role, path] : in.inputs) {
        m.entries["input." + role] = path.string();
        m.entries["digest." + role] = file_digest(path);
    }
    for (const auto& t : result.report.timings) {
        std::ostringstream key;
        key << "time.step" << std::setw(2) << std::setfill('0') << t.step;
        m.entries[key.str()] = BuildReport::format_elapsed(t.seconds) + " " + t.description;
    }
    m.entries["matrix.rows"] = std::to_string(result.weighted.m());
    m.entries["matrix.columns"] = std::to_string(result.weighted.n());
    m.entries["projection.dimension"] = std::to_string(result.space.space().dimension());
    m.entries["output.files"] = "matrix_raw.txt matrix.txt rows.tsv cols.tsv proj.tsv alternates.tsv build_report.txt";
    out("manifest.txt", [&](std::ostream& os) { m.write(os); });
}

/// Loads the projected space and alternates of a run, checking the manifest
/// magic and the row counts.
inline BuiltSpace load_run(const std::filesystem::path& dir, Manifest* manifest_out = nullptr) {
    auto mis = detail::open(dir / "manifest.txt");
    Manifest manifest = Manifest::read(mis);
    auto ris = detail::open(dir / "rows.tsv");
    auto rows = read_rows(ris);
    if (const auto it = manifest.entries.find("matrix.rows");
        it == manifest.entries.end() || it->second != std::to_string(rows.size()))
        throw InputError("rows.tsv does not match manifest");
    auto pis = detail::open(dir / "proj.tsv");
    ProjectedSpace space = read_projection(pis, std::move(rows));
    auto ais = detail::open(dir / "alternates.tsv");
    std::map<WordPair, AlternateSet> sets;
    for (auto& s : read_alternates(ais)) sets.emplace(s.original, std::move(s));
    if (manifest_out) *manifest_out = manifest;
    return BuiltSpace(std::move(space), std::move(sets));
}

} // namespace lra::artifacts

#endif
