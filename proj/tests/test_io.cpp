#include "kgcornell/io/config.hpp"
#include "kgcornell/io/csv.hpp"

#include <gtest/gtest.h>

#include <array>
#include <sstream>

using namespace kgcornell;
using namespace kgcornell::io;

namespace {

ErrorKind kind_of(auto&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::IoError;
}

} // namespace

TEST(Config, ParsesCommentsAndWhitespace)
{
    const auto entries = parse_config_text("# header\n\n  M = 2.5   # mass\nvariant=half\r\n nodes = 0,1,2\n");
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[0].key, "M");
    EXPECT_EQ(entries[0].value, "2.5");
    EXPECT_EQ(entries[0].line, 3);
    const auto cfg = resolve_config(entries, {}, Subcommand::Spectrum);
    EXPECT_EQ(cfg.params.M, 2.5);
    EXPECT_EQ(cfg.variant, KVariant::HalfQuadratic);
    EXPECT_EQ(cfg.nodes, (std::vector<int>{0, 1, 2}));
}

TEST(Config, UnknownKeyNamesLine)
{
    try {
        parse_config_text("M = 1\nbogus = 3\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ConfigParseError);
        EXPECT_EQ(*e.value(), 2.0);
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { parse_config_text("M 1\n"); }), ErrorKind::ConfigParseError);
    EXPECT_EQ(kind_of([] { parse_config_text("M =\n"); }), ErrorKind::ConfigParseError);
    EXPECT_EQ(kind_of([] { parse_config_file("/nonexistent/kg.cfg"); }), ErrorKind::ConfigParseError);
}

TEST(Config, BadValueInFileIsParseError)
{
    const auto entries = parse_config_text("points = many\n");
    EXPECT_EQ(kind_of([&] { resolve_config(entries, {}, Subcommand::Thermo); }), ErrorKind::ConfigParseError);
}

TEST(Config, FlagsOverrideFile)
{
    const auto entries = parse_config_text("bs = 3\nM = 2\nl = 1\n");
    const auto cfg = resolve_config(entries, {{"M", "1"}}, Subcommand::Spectrum);
    EXPECT_EQ(cfg.params.b_s, 3.0);
    EXPECT_EQ(cfg.params.M, 1.0);
    EXPECT_EQ(cfg.l, 1);
}

TEST(Config, Defaults)
{
    const auto cfg = resolve_config({}, {}, Subcommand::Spectrum);
    EXPECT_EQ(cfg.params.a_v, 0.2);
    EXPECT_EQ(cfg.params.a_s, 6.0);
    EXPECT_EQ(cfg.params.b_v, 0.002);
    EXPECT_EQ(cfg.params.b_s, 2.0);
    EXPECT_EQ(cfg.params.M, 1.0);
    EXPECT_EQ(cfg.dim_range(Subcommand::Spectrum), (std::pair{1, 6}));
    EXPECT_EQ(cfg.dim_range(Subcommand::Ode), (std::pair{3, 3}));
    EXPECT_EQ(cfg.n_max, 5);
    EXPECT_EQ(cfg.method, ThermoMethod::Direct);
}

TEST(Config, ParsesRangesAndBrackets)
{
    const auto cfg = resolve_config({}, {{"dims", "2..4"}, {"bracket", "0.5,3"}}, Subcommand::Spectrum);
    EXPECT_EQ(cfg.dims, (std::pair{2, 4}));
    EXPECT_EQ(cfg.bracket, (std::pair{0.5, 3.0}));
    EXPECT_EQ(resolve_config({}, {{"dims", "5"}}, Subcommand::Ode).dim_range(Subcommand::Ode), (std::pair{5, 5}));
}

TEST(Config, UsageErrors)
{
    using Flags = std::vector<std::pair<std::string, std::string>>;
    for (const auto& [flags, cmd] : std::vector<std::pair<Flags, Subcommand>>{
             {{{"bs", "1"}, {"bv", "2"}}, Subcommand::Spectrum},
             {{{"bs", "0"}}, Subcommand::Spectrum},
             {{{"dims", "4..2"}}, Subcommand::Spectrum},
             {{{"dims", "2..4"}}, Subcommand::Ode},
             {{{"dims", "1"}, {"l", "1"}}, Subcommand::Wavefunction},
             {{{"variant", "table2"}}, Subcommand::Spectrum},
             {{{"method", "exact"}}, Subcommand::Thermo},
             {{{"mu-min", "0"}}, Subcommand::Thermo},
             {{{"mu-min", "5"}, {"mu-max", "1"}}, Subcommand::Thermo},
             {{{"bracket", "3,1"}}, Subcommand::Ode},
             {{{"nodes", "0,-1"}}, Subcommand::Ode},
             {{{"nmax", "0"}}, Subcommand::Spectrum},
             {{{"M", "nan"}}, Subcommand::Spectrum},
             {{{"points", "3.5"}}, Subcommand::Thermo},
             {{{"colour", "red"}}, Subcommand::Spectrum},
         }) {
        EXPECT_EQ(kind_of([&] { resolve_config({}, flags, cmd); }), ErrorKind::UsageError) << flags[0].first;
    }
    // unconfined problems are allowed for the ODE solver
    EXPECT_NO_THROW(resolve_config({}, {{"bs", "0"}, {"bv", "0"}}, Subcommand::Ode));
}

TEST(Csv, HeaderOnlyForEmptyTable)
{
    std::ostringstream os;
    write_csv(spectrum_csv({}), os);
    EXPECT_EQ(os.str(), "D,n,l,variant,k,E_plus,E_minus,status\n");
}

TEST(Csv, Headers)
{
    auto header = [](const CsvTable& t) {
        std::ostringstream os;
        write_csv(CsvTable{t.header, {}}, os);
        return os.str();
    };
    EXPECT_EQ(header(thermo_csv({})), "mu,Z_direct,Z_em,F_bar,U_bar,S_bar,Cv_bar\n");
    EXPECT_EQ(header(wavefunction_csv({})), "r,R_paper,R_exact\n");
    EXPECT_EQ(header(ode_csv({})), "D,l,nodes,E_numeric,residual,h\n");
}

TEST(Csv, SpectrumDeterministic)
{
    const std::array<int, 6> dims{1, 2, 3, 4, 5, 6};
    auto render = [&] {
        std::ostringstream os;
        write_csv(spectrum_csv(spectrum_table(CouplingParams::table1(), dims, 5, KVariant::Table1)), os);
        return os.str();
    };
    const auto a = render();
    EXPECT_EQ(a, render());
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 91);
    EXPECT_NE(a.find("3,1,0,table1,11.0349491066643,5.67026266953498,"), std::string::npos);
}

TEST(Csv, NumberFormatting)
{
    EXPECT_EQ(fmt(0.1), "0.1");
    EXPECT_EQ(fmt(std::nan("")), "nan");
    EXPECT_EQ(fmt(1e-300), "1e-300");
    EXPECT_EQ(fmt(-3), "-3");
}

TEST(Csv, Errors)
{
    CsvTable bad{{"a", "b"}, {{"1"}}};
    std::ostringstream os;
    EXPECT_EQ(kind_of([&] { write_csv(bad, os); }), ErrorKind::IoError);
    EXPECT_EQ(kind_of([] { write_csv(CsvTable{{"a"}, {}}, std::string("/nonexistent/dir/out.csv")); }),
              ErrorKind::IoError);
}
