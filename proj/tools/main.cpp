#include <iostream>

int main() {
    std::cout << "deco: scaffold\n";
    return 0;
}
