#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace cohere {

// Minimal streaming JSON writer with a fixed key order and deterministic
// number formatting (doubles at 17 significant digits via to_chars), so
// identical reports serialize to identical bytes on every run.
class JsonWriter {
public:
    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(std::string_view name) {
        comma();
        quote(name);
        out_.push_back(':');
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        comma();
        char buf[40];
        const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
        out_.append(buf, res.ptr);
        return *this;
    }
    JsonWriter& value(std::int64_t v) {
        comma();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        comma();
        out_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v) {
        comma();
        out_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(std::string_view v) {
        comma();
        quote(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& null() {
        comma();
        out_ += "null";
        return *this;
    }

    const std::string& str() const { return out_; }

private:
    JsonWriter& open(char c) {
        comma();
        out_.push_back(c);
        first_.push_back(true);
        return *this;
    }
    JsonWriter& close(char c) {
        out_.push_back(c);
        first_.pop_back();
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) out_.push_back(',');
            first_.back() = false;
        }
    }
    void quote(std::string_view s) {
        out_.push_back('"');
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\r': out_ += "\\r"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_.push_back(c);
                    }
            }
        }
        out_.push_back('"');
    }

    std::string out_;
    std::vector<bool> first_;
    bool pending_value_ = false;
};

}  // namespace cohere
