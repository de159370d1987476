#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "fieldsens/csv.hpp"
#include "fieldsens/errors.hpp"
#include "property.hpp"

using namespace fieldsens;

TEST(Csv, SimpleRows) {
  const auto rows = csv::parse("a,b,c\n1,2,3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", "2", "3"}));
  EXPECT_EQ(rows[1].line, 2u);
}

TEST(Csv, QuotedFieldsAndCrlf) {
  const auto rows = csv::parse("name,ref\r\n\"Malarg\xC3\xBC" "e, AR\",\"say \"\"hi\"\"\"\r\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].fields[0], "Malarg\xC3\xBC" "e, AR");
  EXPECT_EQ(rows[1].fields[1], "say \"hi\"");
}

TEST(Csv, MultilineQuotedField) {
  const auto rows = csv::parse("a,b\n\"x\ny\",z\nlast,row\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1].fields[0], "x\ny");
  EXPECT_EQ(rows[2].line, 4u);
}

TEST(Csv, EmptyCellsAndBlankLines) {
  const auto rows = csv::parse("a,,c\n\n,,\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].fields, (std::vector<std::string>{"a", "", "c"}));
  EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"", "", ""}));
}

TEST(Csv, NoTrailingNewline) {
  const auto rows = csv::parse("a,b");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].fields.size(), 2u);
}

TEST(Csv, ByteOrderMarkSkipped) {
  const auto rows = csv::parse("\xEF\xBB\xBFinstrument\n");
  EXPECT_EQ(rows.at(0).fields.at(0), "instrument");
}

TEST(Csv, UnterminatedQuote) { EXPECT_THROW(csv::parse("a,\"b\n"), SchemaError); }

TEST(Csv, EscapeOnlyWhenNeeded) {
  EXPECT_EQ(csv::escape("plain"), "plain");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("q\"q"), "\"q\"\"q\"");
  EXPECT_EQ(csv::format_row({"a", "b,c", ""}), "a,\"b,c\",\r\n");
}

TEST(CsvProperty, FormatParseRoundTrip) {
  proptest::Gen gen(0xc5);
  const std::string alphabet = "ab ,\"\r\n1.e-";
  for (int i = 0; i < proptest::kCases; ++i) {
    const int cols = gen.integer(1, 6);
    std::vector<std::string> fields;
    bool any_content = false;
    for (int k = 0; k < cols; ++k) {
      std::string f;
      const int len = gen.integer(0, 8);
      for (int j = 0; j < len; ++j) {
        f.push_back(alphabet[static_cast<std::size_t>(gen.integer(0, 12))]);
      }
      any_content = any_content || !f.empty();
      fields.push_back(f);
    }
    if (!any_content && cols == 1) fields[0] = "x";
    const auto rows = csv::parse(csv::format_row(fields));
    ASSERT_EQ(rows.size(), 1u) << "case " << i;
    ASSERT_EQ(rows[0].fields, fields) << "case " << i;
  }
}
