#include <charconv>
#include <cmath>

#include "homoeoid_tools/experiments.hpp"

namespace homoeoid::tools
{
void Table::add(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::logic_error("row width does not match the column schema");
    rows.push_back(std::move(row));
}

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace
{
std::string cell_text(Cell const& c)
{
    return std::visit(
        [](auto const& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
            {
                if (v.find_first_of(",\"\n") == std::string::npos)
                    return v;
                std::string q = "\"";
                for (char ch : v)
                {
                    if (ch == '"')
                        q += '"';
                    q += ch;
                }
                return q + '"';
            }
            else if constexpr (std::is_same_v<T, double>)
            {
                return format_number(v);
            }
            else
            {
                return std::to_string(v);
            }
        },
        c);
}
}  // namespace

std::string to_csv(Table const& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += '\n';
    for (auto const& row : table.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + cell_text(row[i]);
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(Table const& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& row : table.rows)
    {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            std::visit([&](auto const& v) { obj[table.columns[i]] = v; }, row[i]);
        rows.push_back(std::move(obj));
    }
    return {{"columns", table.columns}, {"rows", rows}};
}

}  // namespace homoeoid::tools
