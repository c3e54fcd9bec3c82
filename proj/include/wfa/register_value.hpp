#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>

namespace wfa {

// Immutable bounded record stored in a register: a short tuple of signed
// 64-bit fields. Compared by structural equality. Every record type that is
// CASed in this library embeds a monotone version field, so equal content
// implies the same logical state (no ABA through re-published duplicates).
class RegisterValue {
public:
    static constexpr int kMaxFields = 6;

    RegisterValue() = default;

    RegisterValue(std::initializer_list<std::int64_t> fields) {
        if (fields.size() > kMaxFields)
            throw std::length_error("RegisterValue: too many fields");
        for (std::int64_t x : fields) fields_[size_++] = x;
    }

    std::int64_t operator[](int i) const {
        if (i < 0 || i >= size_) throw std::out_of_range("RegisterValue: field index");
        return fields_[static_cast<std::size_t>(i)];
    }

    int size() const { return size_; }

    void push_back(std::int64_t x) {
        if (size_ >= kMaxFields) throw std::length_error("RegisterValue: full");
        fields_[size_++] = x;
    }

    friend bool operator==(const RegisterValue& a, const RegisterValue& b) {
        return a.size_ == b.size_ && a.fields_ == b.fields_;
    }
    friend bool operator!=(const RegisterValue& a, const RegisterValue& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const RegisterValue& v) {
        os << '(';
        for (int i = 0; i < v.size_; i++) os << (i ? "," : "") << v.fields_[static_cast<std::size_t>(i)];
        return os << ')';
    }

private:
    std::array<std::int64_t, kMaxFields> fields_{};  // unused tail stays zero
    int size_ = 0;
};

}  // namespace wfa
