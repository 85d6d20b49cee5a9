package org.example.p3;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen10 {
    int[] value80 = {4, 5, 6};
    interface Api3 {
        void abstractOne(int x);
        String abstractTwo();
        default int withDefault() { return 1; }
        static Api3 create() {
            return null;
        }
    }
    interface Api30 {
        void abstractOne(int x);
        String abstractTwo();
        default int withDefault() { return 1; }
        static Api30 create() {
            return null;
        }
    }
}

interface Side10 {
    void only();
    default void also() {
        only();
    }
}
