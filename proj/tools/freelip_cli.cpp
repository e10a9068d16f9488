#include <iostream>

int main() {
    std::cout << "freelip: placeholder\n";
    return 0;
}
