#pragma once

// Minimal deterministic JSON writer. Output bytes depend only on the values
// passed in (fields appear in insertion order, doubles printed with %.17g),
// which is what the reproducibility contract of the report files needs.

#include <cmath>
#include <cstdio>
#include <string>

namespace mvh {

inline std::string json_double(double x) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

class JsonWriter {
  public:
    JsonWriter& begin() { return raw("{"); }
    JsonWriter& end() { return raw("}"); }
    JsonWriter& object_begin(const std::string& k) { return key(k).raw("{"); }
    JsonWriter& begin_array(const std::string& k) { return key(k).raw("["); }
    JsonWriter& end_array() { return raw("]"); }

    JsonWriter& field(const std::string& k, double v) { return key(k).raw(json_double(v)); }
    JsonWriter& field(const std::string& k, int v) { return key(k).raw(std::to_string(v)); }
    JsonWriter& field(const std::string& k, long long v) { return key(k).raw(std::to_string(v)); }
    JsonWriter& field(const std::string& k, unsigned long long v) { return key(k).raw(std::to_string(v)); }
    JsonWriter& field(const std::string& k, bool v) { return key(k).raw(v ? "true" : "false"); }
    JsonWriter& field(const std::string& k, const std::string& v) {
        return key(k).raw("\"" + json_escape(v) + "\"");
    }
    JsonWriter& field(const std::string& k, const char* v) { return field(k, std::string(v)); }
    JsonWriter& null_field(const std::string& k) { return key(k).raw("null"); }

    // Inside arrays.
    JsonWriter& item_begin() { return sep().raw("{"); }
    JsonWriter& item(double v) { return sep().raw(json_double(v)); }

    // Splice a complete pre-serialized JSON value.
    JsonWriter& raw_json(const std::string& s) {
        sep();
        out_ += s;
        pending_sep_ = true;
        return *this;
    }

    JsonWriter& key(const std::string& k) {
        sep();
        out_ += "\"" + json_escape(k) + "\":";
        pending_sep_ = false;
        return *this;
    }

    const std::string& str() const { return out_; }

  private:
    JsonWriter& raw(const std::string& s) {
        char c = s.empty() ? '\0' : s[0];
        out_ += s;
        pending_sep_ = (c != '{' && c != '[');
        return *this;
    }
    JsonWriter& sep() {
        if (pending_sep_) out_ += ",";
        pending_sep_ = false;
        return *this;
    }
    std::string out_;
    bool pending_sep_ = false;
};

}  // namespace mvh
