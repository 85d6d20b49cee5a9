package org.example.p5;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
@Deprecated
public class Gen26 {
    private final java.util.function.Supplier<String> gamma14 = () -> {
        return "x";
    };
    private Gen26() {
        this.gamma97 = 0;
    }
}

interface Side26 {
    void only();
    default void also() {
        only();
    }
}
