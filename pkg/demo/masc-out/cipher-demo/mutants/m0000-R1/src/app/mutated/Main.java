package app.mutated;

import javax.crypto.Cipher;

public class Main {

    public static void main(String[] args) {
        try {
            Cipher.getInstance("des");
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
