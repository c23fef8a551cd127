package app.mutated;

import java.net.Socket;
import java.security.cert.CertificateException;
import java.security.cert.X509Certificate;
import javax.net.ssl.SSLEngine;
import javax.net.ssl.X509ExtendedTrustManager;

public class Main {

    public static void main(String[] args) {
        try {
            X509ExtendedTrustManager maskVar0 = new MaskClass0();
        } catch (Exception e) {
            e.printStackTrace();
        }
    }
}
