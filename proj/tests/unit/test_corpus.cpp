#include <doctest.h>

#include <cmath>
#include <sstream>

#include "appsent/corpus.hpp"
#include "appsent/csv.hpp"
#include "appsent/error.hpp"
#include "appsent/rng.hpp"
#include "temp.hpp"

using namespace appsent;
using namespace appsent::corpus;
using appsent::testing::fixture;
using appsent::testing::TempDir;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::BadFormat;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("derive_label splits at 3") {
    CHECK(derive_label(3.0) == Label::Positive);
    CHECK(derive_label(2.9) == Label::Negative);
    CHECK(derive_label(5.0) == Label::Positive);
    CHECK(derive_label(1.0) == Label::Negative);
    CHECK(derive_label(std::nextafter(3.0, 0.0)) == Label::Negative);
    CHECK(kind_of([] { derive_label(0.5); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { derive_label(5.01); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { derive_label(std::nan("")); }) == ErrorKind::OutOfRange);
  }

  TEST_CASE("cell parsers") {
    CHECK(parse_installs("1,000+") == 1000);
    CHECK(parse_installs("1,000,000+") == 1000000);
    CHECK(parse_installs("0") == 0);
    CHECK(parse_price("$4.99") == doctest::Approx(4.99).epsilon(1e-15));
    CHECK(parse_price("0") == 0.0);
    CHECK(parse_size("19M") == std::optional<std::uint64_t>(19922944));
    CHECK(parse_size("512k") == std::optional<std::uint64_t>(512 * 1024));
    CHECK(parse_size("8.5M") == std::optional<std::uint64_t>(8912896));
    CHECK_FALSE(parse_size("Varies with device").has_value());
    CHECK_FALSE(parse_size("").has_value());
    CHECK_FALSE(parse_rating("NaN").has_value());
    CHECK(parse_rating("4.1") == std::optional<double>(4.1));
    CHECK(kind_of([] { parse_installs("Free"); }) == ErrorKind::Unparseable);
    CHECK(kind_of([] { parse_price("Everyone"); }) == ErrorKind::Unparseable);
    CHECK(kind_of([] { parse_size("big"); }) == ErrorKind::Unparseable);
    CHECK(parse_date("January 7, 2018")->iso() == "2018-01-07");
    CHECK(parse_date("2018-08-03")->iso() == "2018-08-03");
    CHECK_FALSE(parse_date("yesterday").has_value());
  }

  TEST_CASE("parse_installs inverts format_installs") {
    Rng rng(41);
    std::vector<std::uint64_t> values{0, 1, 9, 10, 999, 1000, 1001, 999999, 1000000, 1000000000};
    for (int i = 0; i < 5000; ++i) values.push_back(rng.below(1000000001));
    for (auto v : values) {
      const auto text = format_installs(v);
      REQUIRE(parse_installs(text) == v);
    }
    CHECK(format_installs(1000000) == "1,000,000+");
    CHECK(format_installs(0) == "0+");
  }

  TEST_CASE("csv reader handles quotes, CRLF and embedded newlines") {
    std::istringstream in("a,b,c\r\n\"x, y\",\"say \"\"hi\"\"\",\"two\nlines\"\r\nlast,,\n");
    csv::Reader reader(in);
    csv::Row row;
    REQUIRE(reader.next(row));
    CHECK(row == csv::Row{"a", "b", "c"});
    REQUIRE(reader.next(row));
    CHECK(row == csv::Row{"x, y", "say \"hi\"", "two\nlines"});
    REQUIRE(reader.next(row));
    CHECK(row == csv::Row{"last", "", ""});
    CHECK_FALSE(reader.next(row));
    std::ostringstream out;
    csv::write_row(out, {"x, y", "say \"hi\"", "plain"});
    CHECK(out.str() == "\"x, y\",\"say \"\"hi\"\"\",plain\n");
  }

  TEST_CASE("invalid UTF-8 is replaced and counted") {
    std::string text = "ok \xff\xfe done \xc3\xa9";
    const auto replaced = csv::sanitize_utf8(text);
    CHECK(replaced == 2);
    CHECK(text == "ok \xef\xbf\xbd\xef\xbf\xbd done \xc3\xa9");
  }

  TEST_CASE("app metadata fixture") {
    const auto load = load_app_metadata(fixture("apps.csv"));
    CHECK(load.records.size() == 21);
    REQUIRE(load.rejected.size() == 2);
    CHECK(load.rejected[0].line == 23);
    CHECK(load.rejected[1].line == 24);
    CHECK(load.records.size() + load.rejected.size() == load.input_rows);

    const auto& unacademy = load.records[0];
    CHECK(unacademy.app_name == "Unacademy");
    CHECK(unacademy.installs == 1000000);
    CHECK(unacademy.size_bytes == std::optional<std::uint64_t>(19 * (1u << 20)));
    CHECK(unacademy.last_updated->iso() == "2018-07-31");
    CHECK_FALSE(load.records[1].size_bytes.has_value());

    for (const auto& a : load.records) {
      CHECK((a.app_type == AppType::Free) == (a.price == 0.0));
      if (a.rating) CHECK((*a.rating >= 1.0 && *a.rating <= 5.0));
    }
    const auto weather = std::find_if(load.records.begin(), load.records.end(),
                                      [](const AppRecord& a) { return a.app_name == "Old Weather Widget"; });
    REQUIRE(weather != load.records.end());
    CHECK_FALSE(weather->rating.has_value());
  }

  TEST_CASE("unreadable optional cells become missing") {
    TempDir dir;
    const auto path = dir.write("apps.csv",
                                "App,Category,Rating,Reviews,Size,Installs,Type,Price,Content Rating,Genres,"
                                "Last Updated,Current Ver,Android Ver\n"
                                "A,TOOLS,high,10,huge,\"1,000+\",Free,0,Everyone,Tools,,1.0,4.0\n");
    const auto load = load_app_metadata(path);
    REQUIRE(load.records.size() == 1);
    CHECK_FALSE(load.records[0].rating.has_value());
    CHECK_FALSE(load.records[0].size_bytes.has_value());
    CHECK(load.records[0].installs == 1000);
    CHECK(load.coerced_missing == 2);
  }

  TEST_CASE("app metadata errors") {
    TempDir dir;
    CHECK(kind_of([] { load_app_metadata("/definitely/not/here.csv"); }) == ErrorKind::MissingFile);
    const auto bad = dir.write("bad.csv", "App,Category,Rating\nA,B,4\n");
    CHECK(kind_of([&] { load_app_metadata(bad); }) == ErrorKind::MalformedHeader);
  }

  TEST_CASE("review corpus drops empty text") {
    TempDir dir;
    std::string text = "app,text,label\n";
    for (int i = 0; i < 10; ++i) {
      const bool empty = i == 3 || i == 7;
      text += "App" + std::to_string(i) + "," + (empty ? std::string("\"  \"") : "review number " + std::to_string(i)) +
              ",Positive\n";
    }
    const auto load = load_review_corpus(dir.write("r.csv", text));
    CHECK(load.records.size() == 8);
    CHECK(load.dropped_count() == 2);
    CHECK(load.records.size() + load.dropped_count() == load.input_rows);
  }

  TEST_CASE("review corpus dedupes, keeps neutral aside and derives labels from ratings") {
    TempDir dir;
    const auto path = dir.write("r.csv",
                                "App,Review,Rating,Sentiment\n"
                                "A,Great,5,Positive\n"
                                "A,Great,5,Positive\n"
                                "B,Great,5,Positive\n"
                                "C,meh,,Neutral\n"
                                "D,bad,2,Positive\n"
                                "E,fine,3,\n"
                                "F,unlabeled,,\n"
                                "G,broken,9,Positive\n");
    const auto load = load_review_corpus(path);
    REQUIRE(load.records.size() == 4);
    CHECK(load.duplicates == 1);
    REQUIRE(load.neutral.size() == 1);
    CHECK(load.neutral[0].app_name == "C");
    CHECK(load.records[2].label == Label::Negative);  // rating 2 overrides the label column
    CHECK(load.records[3].label == Label::Positive);
    for (const auto& r : load.records) {
      if (r.rating) CHECK(r.label == derive_label(*r.rating));
    }
    CHECK(load.records.size() + load.dropped_count() == load.input_rows);
    CHECK(load_review_corpus(path).records == load.records);
  }

  TEST_CASE("review corpus column errors") {
    TempDir dir;
    CHECK(kind_of([&] { load_review_corpus(dir.write("x.csv", "foo,bar\n1,2\n")); }) == ErrorKind::NoUsableColumns);
    CHECK(kind_of([&] { load_review_corpus(dir.write("y.csv", "text,other\nhi,2\n")); }) == ErrorKind::NoUsableColumns);
    CHECK(kind_of([] { load_review_corpus("/nope/reviews.csv"); }) == ErrorKind::MissingFile);
  }

  TEST_CASE("review fixture") {
    const auto load = load_review_corpus(fixture("reviews.csv"));
    CHECK(load.records.size() == 80);
    CHECK(load.neutral.size() == 2);
    CHECK(load.duplicates == 1);
    CHECK(load.records.size() + load.dropped_count() == load.input_rows);
  }

  TEST_CASE("student survey") {
    TempDir dir;
    const auto path = dir.write("s.csv",
                                "Department,App,Review,Rating,Type,Year\n"
                                "Mathematics,WPS Office,Very well designed.,5,Free,2\n"
                                "Physics,JioSaavn,Too many ads,2,Free,3\n"
                                "Physics,JioSaavn,,4,Free,3\n"
                                ",JioSaavn,no department,4,Free,3\n");
    const auto load = load_student_survey(path);
    REQUIRE(load.records.size() == 2);
    CHECK(load.rejected.size() == 2);
    CHECK(load.records[0] == StudentRecord{"Mathematics", "WPS Office", "Very well designed.", 5.0, AppType::Free});
    CHECK(to_review(load.records[0]).label == Label::Positive);
    CHECK(to_review(load.records[1]).label == Label::Negative);
    CHECK(to_review(load.records[1]).source == Source::Student);
    CHECK(is_student_survey(path));
    CHECK_FALSE(is_student_survey(fixture("reviews.csv")));

    const auto wide = dir.write("w.csv", "Department,App,Review,Rating,Type,A,B\nX,Y,Z,3,Free,1,2\n");
    CHECK(kind_of([&] { load_student_survey(wide); }) == ErrorKind::MalformedHeader);

    const auto fx = load_student_survey(fixture("students.csv"));
    CHECK(fx.records.size() == 27);
    CHECK(fx.rejected.size() == 1);
  }

  TEST_CASE("canonical exports reload to the same records") {
    TempDir dir;
    const auto apps = load_app_metadata(fixture("apps.csv")).records;
    std::ostringstream a;
    write_apps_csv(a, apps);
    CHECK(load_app_metadata(dir.write("apps.csv", a.str())).records == apps);

    const auto reviews = load_review_corpus(fixture("reviews.csv")).records;
    std::ostringstream r;
    write_reviews_csv(r, reviews);
    CHECK(load_review_corpus(dir.write("reviews.csv", r.str())).records == reviews);

    const auto students = load_student_survey(fixture("students.csv")).records;
    std::ostringstream s;
    write_students_csv(s, students);
    const auto again = dir.write("students.csv", s.str());
    CHECK(load_student_survey(again).records == students);
    CHECK(load_labeled_reviews(again) == to_reviews(students));
  }
}
