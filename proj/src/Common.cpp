#include "fspta/Common.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace fspta::log {

static std::atomic<Level> gLevel{Level::Off};

Level level() { return gLevel.load(std::memory_order_relaxed); }
void setLevel(Level l) { gLevel.store(l, std::memory_order_relaxed); }

void setLevelFromEnv() {
  const char *v = std::getenv("FSCONSG_LOG");
  if (!v)
    return;
  if (std::strcmp(v, "info") == 0)
    setLevel(Level::Info);
  else if (std::strcmp(v, "debug") == 0)
    setLevel(Level::Debug);
  else
    setLevel(Level::Off);
}

void info(const std::string &msg) {
  if (level() >= Level::Info)
    std::fprintf(stderr, "[fspta] %s\n", msg.c_str());
}

void debug(const std::string &msg) {
  if (level() >= Level::Debug)
    std::fprintf(stderr, "[fspta:debug] %s\n", msg.c_str());
}

} // namespace fspta::log
