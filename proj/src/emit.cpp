#include "loopspace/emit.hpp"

#include <algorithm>
#include <sstream>

namespace loopspace {

std::string render_json(const Json& doc) {
    return doc.dump(2) + "\n";
}

std::string render_table(const TextTable& t) {
    std::vector<size_t> widths;
    auto widen = [&](const std::vector<std::string>& row) {
        if (widths.size() < row.size())
            widths.resize(row.size(), 0);
        for (size_t i = 0; i < row.size(); ++i)
            widths[i] = std::max(widths[i], row[i].size());
    };
    widen(t.header);
    for (const auto& row : t.rows)
        widen(row);

    std::ostringstream os;
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            os << row[i];
            if (i + 1 < row.size())
                os << std::string(widths[i] - row[i].size() + 2, ' ');
        }
        os << "\n";
    };
    if (!t.header.empty()) {
        emit_row(t.header);
        size_t total = 0;
        for (size_t i = 0; i < widths.size(); ++i)
            total += widths[i] + (i + 1 < widths.size() ? 2 : 0);
        os << std::string(total, '-') << "\n";
    }
    for (const auto& row : t.rows)
        emit_row(row);
    return os.str();
}

}  // namespace loopspace
