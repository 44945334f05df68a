#pragma once

#include <ostream>

namespace alang {

// Quick property and oracle checks behind `alang check`; prints one line
// per check and returns the number of failures.
int run_selfcheck(std::ostream& os);

}  // namespace alang
