#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qanneal
{

/*! \brief A projection removed the whole state (norm below the annihilation threshold). */
class annihilated_state : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Exhaustive operations refuse networks that are too large to enumerate. */
class size_overflow : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Parse failure with a 1-based line/column position. */
class parse_error : public std::runtime_error
{
public:
  parse_error( std::size_t line, std::size_t column, const std::string& message )
      : std::runtime_error( "line " + std::to_string( line ) + ", col " + std::to_string( column ) + ": " + message ),
        line_( line ), column_( column ), message_( message )
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/*! \brief Raised when a network fails structural validation. */
class validation_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief A particle-representation state has support outside the qubit-representable span. */
class not_mappable : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Final conditions that no normalized state can satisfy. */
class no_solution : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Inputs outside the domain of a closed-form relation. */
class domain_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace qanneal
