#pragma once

#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace torwind {

/// Insertion-ordered JSON document writer. Output is byte-deterministic:
/// object keys keep insertion order and floating-point values are printed
/// with 17 significant digits.
class Json {
public:
    Json() : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(int v) : value_(static_cast<long long>(v)) {}
    Json(long long v) : value_(v) {}
    Json(double v) : value_(v) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}

    static Json object() {
        Json j;
        j.value_ = Members{};
        return j;
    }
    static Json array() {
        Json j;
        j.value_ = Items{};
        return j;
    }

    Json& set(std::string key, Json value) {
        std::get<Members>(value_).emplace_back(std::move(key), std::move(value));
        return *this;
    }

    Json& push(Json value) {
        std::get<Items>(value_).push_back(std::move(value));
        return *this;
    }

    void dump(std::ostream& os, int indent = 0) const {
        write(os, indent);
        os << '\n';
    }

    std::string dumps() const {
        std::ostringstream os;
        dump(os);
        return os.str();
    }

private:
    using Items = std::vector<Json>;
    using Members = std::vector<std::pair<std::string, Json>>;
    std::variant<std::nullptr_t, bool, long long, double, std::string, Items,
                 Members>
        value_;

    static void write_escaped(std::ostream& os, const std::string& s) {
        os << '"';
        for (char c : s) {
            switch (c) {
            case '"': os << "\\\""; break;
            case '\\': os << "\\\\"; break;
            case '\n': os << "\\n"; break;
            case '\r': os << "\\r"; break;
            case '\t': os << "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    os << buf;
                } else {
                    os << c;
                }
            }
        }
        os << '"';
    }

    void write(std::ostream& os, int indent) const {
        const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
        const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            os << "null";
        } else if (auto* b = std::get_if<bool>(&value_)) {
            os << (*b ? "true" : "false");
        } else if (auto* i = std::get_if<long long>(&value_)) {
            os << *i;
        } else if (auto* d = std::get_if<double>(&value_)) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", *d);
            os << buf;
        } else if (auto* s = std::get_if<std::string>(&value_)) {
            write_escaped(os, *s);
        } else if (auto* items = std::get_if<Items>(&value_)) {
            if (items->empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t k = 0; k < items->size(); ++k) {
                os << pad_in;
                (*items)[k].write(os, indent + 1);
                os << (k + 1 < items->size() ? ",\n" : "\n");
            }
            os << pad << ']';
        } else if (auto* members = std::get_if<Members>(&value_)) {
            if (members->empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            for (std::size_t k = 0; k < members->size(); ++k) {
                os << pad_in;
                write_escaped(os, (*members)[k].first);
                os << ": ";
                (*members)[k].second.write(os, indent + 1);
                os << (k + 1 < members->size() ? ",\n" : "\n");
            }
            os << pad << '}';
        }
    }
};

} // namespace torwind
