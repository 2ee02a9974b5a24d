#include <gtest/gtest.h>

#include <cstring>
#include <sstream>

#include "txpower/dataset.hpp"

using namespace txpower;

namespace {

const char* kPaHeader = "freq_ghz,psat_dbm,pae_pct,gain_db,area_mm2,technology,source\n";

PaDataset read_pa(const std::string& body) {
    std::istringstream in(body);
    return read_survey_csv<PaSurveyEntry>(in, "mem.csv");
}

} // namespace

TEST(Dataset, LoadsWellFormedPaCsv) {
    auto ds = read_pa(std::string(kPaHeader) +
                      "28,12.5,30,15,0.5,CMOS 65nm,a\n"
                      "60,10,22.5,18,,CMOS 40nm,b\n"
                      "140,\"6\",9.5,20,0.25,\"SiGe, 130nm\",c\n");
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_DOUBLE_EQ(ds.entries[0].freq.value(), 28.0);
    EXPECT_DOUBLE_EQ(ds.entries[1].pae_pct, 22.5);
    EXPECT_FALSE(ds.entries[1].area_mm2.has_value());
    EXPECT_EQ(ds.entries[2].technology, "SiGe, 130nm");
    EXPECT_TRUE(ds.rejected.empty());
    EXPECT_EQ(ds.path, "mem.csv");
}

TEST(Dataset, RejectsRowWithZeroPae) {
    auto ds = read_pa(std::string(kPaHeader) + "28,12.5,30,15,0.5,CMOS,a\n60,10,0,18,,CMOS,b\n");
    ASSERT_EQ(ds.size(), 1u);
    ASSERT_EQ(ds.rejected.size(), 1u);
    EXPECT_EQ(ds.rejected[0].row, 3u);
    EXPECT_EQ(ds.rejected[0].column, 3u);
    EXPECT_NE(ds.rejected[0].to_string().find("3:3:"), std::string::npos);
    EXPECT_NE(ds.rejected[0].message.find("pae_pct"), std::string::npos);
}

TEST(Dataset, EmptyFileHasZeroValidRows) {
    try {
        read_pa("");
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zero valid rows"), std::string::npos);
    }
    EXPECT_THROW(read_pa(kPaHeader), DataError);
}

TEST(Dataset, AllRowsInvalidIsZeroValidRows) {
    try {
        read_pa(std::string(kPaHeader) + "28,12.5,120,15,,CMOS,a\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("zero valid rows"), std::string::npos);
    }
}

TEST(Dataset, MalformedHeader) {
    EXPECT_THROW(read_pa("freq,psat,pae\n1,2,3\n"), DataError);
}

TEST(Dataset, UnparsableNumberNamesRowAndColumn) {
    try {
        read_pa(std::string(kPaHeader) + "28,12.5,30,15,,CMOS,a\n60,abc,22,18,,CMOS,b\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("mem.csv:3:2"), std::string::npos) << e.what();
    }
}

TEST(Dataset, WrongFieldCount) { EXPECT_THROW(read_pa(std::string(kPaHeader) + "28,12.5,30\n"), DataError); }

TEST(Dataset, MissingMandatoryCellRejectsRow) {
    auto ds = read_pa(std::string(kPaHeader) + "28,,30,15,,CMOS,a\n60,10,20,18,,CMOS,b\n");
    EXPECT_EQ(ds.size(), 1u);
    ASSERT_EQ(ds.rejected.size(), 1u);
    EXPECT_EQ(ds.rejected[0].column, 2u);
}

TEST(Dataset, MissingFile) {
    try {
        load_pa_csv("/nonexistent/pa.csv");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/pa.csv"), std::string::npos);
    }
}

TEST(Dataset, OscillatorInvariants) {
    std::istringstream in(
        "freq_ghz,pdc_mw,pout_dbm,pn_dbc_hz,offset_mhz,technology,source\r\n"
        "60,10,-5,-95,1,CMOS,a\r\n"
        "70,0,-5,-95,1,CMOS,b\r\n"
        "80,10,-5,3,1,CMOS,c\r\n"
        "90,10,-5,-95,0,CMOS,d\r\n");
    auto ds = read_survey_csv<OscSurveyEntry>(in, "osc");
    EXPECT_EQ(ds.size(), 1u);
    ASSERT_EQ(ds.rejected.size(), 3u);
    EXPECT_EQ(ds.rejected[0].column, 2u);
    EXPECT_EQ(ds.rejected[1].column, 4u);
    EXPECT_EQ(ds.rejected[2].column, 5u);
}

TEST(Dataset, MixerLoad) {
    std::istringstream in("freq_ghz,pdc_mw,cg_db,technology,source\n94,12,-3.5,,\n");
    auto ds = read_survey_csv<MixerSurveyEntry>(in, "mix");
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_DOUBLE_EQ(ds.entries[0].cg_db, -3.5);
    EXPECT_TRUE(ds.entries[0].technology.empty());
}

TEST(Dataset, SummaryStats) {
    auto ds = read_pa(std::string(kPaHeader) + "10,1,10,1,,x,a\n20,2,20,2,,x,b\n30,3,30,3,2,x,c\n");
    const auto stats = summary_stats(ds);
    ASSERT_EQ(stats.size(), 5u);
    EXPECT_EQ(stats[0].name, "freq_ghz");
    EXPECT_DOUBLE_EQ(stats[0].min, 10.0);
    EXPECT_DOUBLE_EQ(stats[0].max, 30.0);
    EXPECT_DOUBLE_EQ(stats[0].mean, 20.0);
    EXPECT_EQ(stats[0].count, 3u);
    EXPECT_EQ(stats[4].name, "area_mm2");
    EXPECT_EQ(stats[4].count, 1u);
}

TEST(Dataset, SummaryStatsSingleRow) {
    auto ds = read_pa(std::string(kPaHeader) + "42.5,1,10,1,,x,a\n");
    const auto stats = summary_stats(ds);
    ASSERT_EQ(stats.size(), 4u);  // area missing everywhere
    EXPECT_EQ(stats[0].min, 42.5);
    EXPECT_EQ(stats[0].max, 42.5);
    EXPECT_EQ(stats[0].mean, 42.5);
}

TEST(Dataset, BundledMixerSpanMatchesGenerator) {
    const auto ds = load_mixer_csv(std::string(TXPOWER_DATA_DIR) + "/mixer_survey.csv");
    const auto stats = summary_stats(ds);
    EXPECT_EQ(stats[0].name, "freq_ghz");
    EXPECT_EQ(stats[0].max, 140.0);
    EXPECT_EQ(stats[0].min, 10.0);
}

TEST(Dataset, TechnologyFilter) {
    auto ds = read_pa(std::string(kPaHeader) + "10,1,10,1,,CMOS 65nm,a\n20,2,20,2,,SiGe,b\n30,3,30,3,,cmos 28nm,c\n");
    const auto cmos = filter_by_technology(ds, "CMOS");
    EXPECT_EQ(cmos.size(), 2u);
    EXPECT_THROW(filter_by_technology(ds, "GaN"), DataError);
}

TEST(DatasetProperty, SerializeLoadRoundTripIsBitIdentical) {
    for (const char* name : {"pa_survey.csv"}) {
        const auto ds = load_pa_csv(std::string(TXPOWER_DATA_DIR) + "/" + name);
        std::ostringstream out;
        write_survey_csv(out, ds);
        std::istringstream in(out.str());
        const auto again = read_survey_csv<PaSurveyEntry>(in, "rt");
        ASSERT_EQ(again.size(), ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto& a = ds.entries[i];
            const auto& b = again.entries[i];
            EXPECT_EQ(std::memcmp(&a.freq, &b.freq, sizeof(double)), 0);
            EXPECT_EQ(a.psat.value(), b.psat.value());
            EXPECT_EQ(a.pae_pct, b.pae_pct);
            EXPECT_EQ(a.gain_db, b.gain_db);
            EXPECT_EQ(a.area_mm2, b.area_mm2);
            EXPECT_EQ(a.technology, b.technology);
            EXPECT_EQ(a.source, b.source);
        }
        std::ostringstream out2;
        write_survey_csv(out2, again);
        EXPECT_EQ(out.str(), out2.str());
    }
    const auto osc = load_osc_csv(std::string(TXPOWER_DATA_DIR) + "/osc_survey.csv");
    std::ostringstream o1;
    write_survey_csv(o1, osc);
    std::istringstream i1(o1.str());
    const auto osc2 = read_survey_csv<OscSurveyEntry>(i1, "rt");
    for (std::size_t i = 0; i < osc.size(); ++i) {
        EXPECT_EQ(osc.entries[i].pdc.value(), osc2.entries[i].pdc.value());
        EXPECT_EQ(osc.entries[i].pout.value(), osc2.entries[i].pout.value());
    }
}
