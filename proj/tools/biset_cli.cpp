#include <cstdio>

int main() {
  std::puts("biset: subcommands not wired up yet");
  return 1;
}
