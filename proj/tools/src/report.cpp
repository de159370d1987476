#include "report.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "fieldsens/csv.hpp"

namespace fieldsens::cli {

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 5);
  std::string sci(buf, res.ptr);
  const auto epos = sci.find('e');
  const int exponent = std::stoi(sci.substr(epos + 1));

  auto strip = [](std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
  };

  if (exponent >= -3 && exponent < 6) {
    res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 5 - exponent);
    return strip(std::string(buf, res.ptr));
  }
  return strip(sci.substr(0, epos)) + sci.substr(epos);
}

namespace {

void write(const Json& v, std::string& out, bool pretty, int depth) {
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(2 * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += pretty ? ": " : ":";
        write(item, out, pretty, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(item, out, pretty, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

void flatten(const Json& v, const std::string& path,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) {
      flatten(item, path.empty() ? key : path + "." + key, out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      flatten(v[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else if (v.is_string()) {
    out.emplace_back(path, v.get<std::string>());
  } else if (v.is_number_float()) {
    out.emplace_back(path, format_number(v.get<double>()));
  } else {
    out.emplace_back(path, v.dump());
  }
}

}  // namespace

std::string render_json(const Json& value, bool pretty) {
  std::string out;
  write(value, out, pretty, 0);
  out += '\n';
  return out;
}

std::string render_text(const Json& value) {
  std::vector<std::pair<std::string, std::string>> leaves;
  flatten(value, "", leaves);
  std::string out;
  for (const auto& [k, v] : leaves) out += k + " = " + v + "\n";
  return out;
}

std::string render_key_value_csv(const Json& value) {
  std::vector<std::pair<std::string, std::string>> leaves;
  flatten(value, "", leaves);
  std::string out = csv::format_row({"key", "value"});
  for (const auto& [k, v] : leaves) out += csv::format_row({k, v});
  return out;
}

}  // namespace fieldsens::cli
