#pragma once

#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace qanneal
{

struct trace_row
{
  std::size_t step{};
  double time{};
  double total_energy{};
  double gate_energy{};
  bool clamped{};
  double overlap_solution{};

  bool operator==( const trace_row& ) const = default;
};

/*! \brief Time series of one relaxation run. */
struct relaxation_trace
{
  std::vector<trace_row> rows;

  void push( const trace_row& r ) { rows.push_back( r ); }
  bool empty() const noexcept { return rows.empty(); }
  const trace_row& back() const { return rows.back(); }
};

inline constexpr const char* trace_csv_header = "step,time,total_energy,gate_energy,clamped,overlap_solution";

namespace detail
{

inline void append_double( std::string& out, double x )
{
  char buf[64];
  auto [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), x );
  out.append( buf, ptr );
}

} // namespace detail

/* shortest round-trip number formatting, so identical runs give identical bytes */
inline void write_trace_csv( std::ostream& os, const relaxation_trace& trace )
{
  std::string line;
  os << trace_csv_header << '\n';
  for ( const auto& r : trace.rows )
  {
    line.clear();
    line += std::to_string( r.step );
    line += ',';
    detail::append_double( line, r.time );
    line += ',';
    detail::append_double( line, r.total_energy );
    line += ',';
    detail::append_double( line, r.gate_energy );
    line += r.clamped ? ",1," : ",0,";
    detail::append_double( line, r.overlap_solution );
    line += '\n';
    os << line;
  }
}

} // namespace qanneal
