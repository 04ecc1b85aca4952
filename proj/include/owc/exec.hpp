#pragma once

namespace owc {

// Every parallel kernel keeps a serial twin; Serial is the reference
// implementation the tests compare against.
enum class ExecMode { Serial, Parallel };

}  // namespace owc
